"""Closed walks on E6 and the series built from them."""

from adespectra import build_graph, decompose, loop_counts, poincare_resolvent, series_expand
from adespectra.recursion import cyclotomic_simplify
from adespectra.series import jones_theta, t_series

g = build_graph("E6")
print("E6 edges:", g.edges())
print("loops at the base vertex:", loop_counts(g, 8))

# the resolvent gives every loop count at once as a rational function of z
f = poincare_resolvent(decompose(g))
print("f(z) =", f.format("z"))
print("expansion:", [int(c) for c in series_expand(f, 8)])

theta = jones_theta(f)
t = t_series(theta)
print("Theta(q) =", theta.format())
print("T(q) =", cyclotomic_simplify(t).format())
