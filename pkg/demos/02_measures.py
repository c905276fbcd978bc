"""Spectral measures on the circle: moments, pushforwards and point masses."""

from adespectra import build_graph, catalog_measure, loop_counts, pushforward_moment, verify_measure
from adespectra.measures import point_weights

for name in ["A(4)", "D(6)", "A1ext(8)", "E6", "E8ext", "E7"]:
    entry = catalog_measure(name)
    print(f"{name:9} {entry.formula}")

entry = catalog_measure("E6")
m = entry.measure
print("\nE6 measure:", m)
print("pushforward moments:", [int(pushforward_moment(m, 2 * k)) for k in range(8)])
print("loop counts:        ", loop_counts(build_graph("E6"), 7))
print("verified through 2k = 40:", verify_measure("E6", m, 20))

# numeric rendering of the point masses, for display only
w = point_weights(catalog_measure("E6ext").measure, digits=12)
print("\nE6ext point masses (u = exp(2 pi i t)):")
for t, mass in w["points"]:
    print(f"  t = {str(t):>5}  mass {mass}")
print("continuous part:", w["continuous"])
