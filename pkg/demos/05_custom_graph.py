"""A graph outside the catalog: build it, find its T-series, try to decompose it."""

from adespectra import BipartiteGraph, decompose, poincare_resolvent, series_expand
from adespectra.cyclotomic import decompose as decompose_t
from adespectra.errors import NotRootOfUnitySupportedError, PeriodError
from adespectra.recursion import cyclotomic_simplify
from adespectra.series import jones_theta, t_series

# triple point with arms 1, 2, 3 plus a spur: vertex 0 is the base
edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (6, 7), (2, 8)]
g = BipartiteGraph.from_edges(9, edges, name="custom")
f = poincare_resolvent(decompose(g))
t = t_series(jones_theta(f))
print("loops:", [int(c) for c in series_expand(f, 10)])
print("T(q) =", cyclotomic_simplify(t).format())

try:
    system, dec = decompose_t(t)
    print(dec.summary())
except (NotRootOfUnitySupportedError, PeriodError) as exc:
    # norm above 2: the measure does not live on roots of unity
    print("no period found:", exc)
