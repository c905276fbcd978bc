from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from adespectra.errors import GraphNameError, NotFiniteError, ParityError, RangeError
from adespectra.graphs import (
    BipartiteGraph,
    GraphName,
    build_graph,
    decompose,
    default_catalog,
    loop_count,
    loop_counts,
    truncate_infinite,
    walk_counts,
)


def brute_force_loops(g: BipartiteGraph, length: int, start: int = 0) -> int:
    """Enumerate closed walks one step at a time (no matrix algebra)."""
    nbrs = [list(np.nonzero(g.adjacency[v])[0]) for v in range(g.vertex_count)]
    counts = {start: 1}
    for _ in range(length):
        nxt: dict[int, int] = {}
        for v, c in counts.items():
            for w in nbrs[v]:
                nxt[w] = nxt.get(w, 0) + c
        counts = nxt
    return counts.get(start, 0)


def catalan(k):
    return comb(2 * k, k) // (k + 1)


# names -----------------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, expected",
    [("A(4)", "A(4)"), ("e6", "E6"), ("e7EXT", "E7ext"), ("f(2,1,3)", "F(2,1,3)"), ("ainf", "AInf")],
)
def test_name_parsing_is_case_insensitive(text, expected):
    assert str(GraphName.parse(text)) == expected


@pytest.mark.parametrize("text", ["X(3)", "A", "A(1,2)", "E9", "F(1,2)", "A(x)"])
def test_bad_names(text):
    with pytest.raises(GraphNameError):
        GraphName.parse(text)


@pytest.mark.parametrize("text", ["A(0)", "D(2)", "D1ext(3)", "A1ext(2)", "A1ext(5)", "F(0,1,1)"])
def test_out_of_range(text):
    with pytest.raises(RangeError):
        GraphName.parse(text)


# construction ------------------------------------------------------------------------


def test_e6_is_triple_point_graph():
    g = build_graph("E6")
    assert g.vertex_count == 6
    assert sorted(g.degree(v) for v in range(6)) == [1, 1, 1, 2, 2, 3]
    assert g.degree(0) == 1


def test_a1ext_four_is_square():
    g = build_graph("A1ext(4)")
    assert g.vertex_count == 4
    assert all(g.degree(v) == 2 for v in range(4))


def test_f111_is_d4():
    f = build_graph("F(1,1,1)")
    d = build_graph("D(4)")
    assert f.vertex_count == d.vertex_count == 4
    assert loop_counts(f, 10) == loop_counts(d, 10)


@pytest.mark.parametrize("name", [str(n) for n in default_catalog()])
def test_catalog_graphs_are_valid(name):
    g = build_graph(name)
    a = g.adjacency
    assert (a == a.T).all() and not a.diagonal().any()
    assert g.parity[0] == 0
    for i, j in g.edges():
        assert g.parity[i] != g.parity[j]


def test_vertex_counts_follow_conventions():
    assert build_graph("A(7)").vertex_count == 7
    assert build_graph("D(7)").vertex_count == 7
    assert build_graph("D1ext(7)").vertex_count == 8
    assert build_graph("F(3,1,2)").vertex_count == 7
    assert build_graph("E8ext").vertex_count == 9


def test_distinguished_vertex_placement():
    # end of the A-tail
    assert build_graph("A(5)").degree(0) == 1
    d = build_graph("D(6)")
    assert d.degree(0) == 1 and loop_count(d, 2) == 1 and loop_count(d, 4) == 2
    # fork end for D1ext: its neighbour is a triple point
    g = build_graph("D1ext(6)")
    nb = int(np.nonzero(g.adjacency[0])[0][0])
    assert g.degree(0) == 1 and g.degree(nb) == 3


def test_from_edges_rejects_bad_graphs():
    with pytest.raises(ValueError):
        BipartiteGraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    with pytest.raises(ValueError):
        BipartiteGraph.from_edges(3, [(0, 1)])
    with pytest.raises(ValueError):
        BipartiteGraph.from_edges(2, [(0, 0)])


def test_symbolic_names_need_truncation():
    with pytest.raises(NotFiniteError):
        build_graph("AInf")
    with pytest.raises(TypeError):
        truncate_infinite("A(3)", 5)


def test_adjacency_is_read_only():
    g = build_graph("A(3)")
    with pytest.raises(ValueError):
        g.adjacency[0, 1] = 0


def test_json_shape():
    data = build_graph("A(3)").to_json()
    assert data == {
        "name": "A(3)",
        "vertex_count": 3,
        "distinguished": 0,
        "edges": [[0, 1], [1, 2]],
        "parity": ["even", "odd", "even"],
    }


# decomposition ---------------------------------------------------------------------


def test_decompose_single_edge():
    d = decompose(build_graph("A(2)"))
    assert d.M.tolist() == [[1]] and d.L.tolist() == [[1]] and d.N.tolist() == [[1]]


def test_decompose_d_seed():
    d = decompose(build_graph("D(3)"))
    assert d.M.tolist() == [[1, 1]] and d.L.tolist() == [[2]]


def test_decompose_fork_seed():
    d = decompose(build_graph("D1ext(4)"))
    assert d.L.tolist() == [[1] * 4] * 4


@pytest.mark.parametrize("name", [str(n) for n in default_catalog()])
def test_decomposition_reassembles(name):
    g = build_graph(name)
    d = decompose(g)
    a2 = g.adjacency @ g.adjacency
    assert (a2[np.ix_(d.even, d.even)] == d.L).all()
    assert (d.L == d.L.T).all() and (d.N == d.N.T).all()
    assert d.L[0, 0] == g.degree(0)
    rebuilt = np.zeros_like(g.adjacency)
    rebuilt[np.ix_(d.even, d.odd)] = d.M
    rebuilt[np.ix_(d.odd, d.even)] = d.M.T
    assert (rebuilt == g.adjacency).all()


# loop counts ---------------------------------------------------------------------------


def test_loop_count_zero_length():
    assert loop_count(build_graph("E8"), 0) == 1


def test_loop_count_path_of_four():
    assert loop_count(build_graph("A(4)"), 8) == 13
    assert loop_counts(build_graph("A(4)"), 4) == [1, 1, 2, 5, 13]


def test_loop_count_rejects_odd_length():
    with pytest.raises(ParityError):
        loop_count(build_graph("A(4)"), 3)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_cycle_central_binomials(n):
    g = build_graph(f"A1ext({2 * n})")
    for k in range(n):
        assert loop_count(g, 2 * k) == comb(2 * k, k)


@pytest.mark.parametrize("name", ["A(5)", "D(6)", "E6", "E7", "E8", "D1ext(7)", "E7ext", "F(2,2,3)"])
def test_loop_counts_match_brute_force(name):
    g = build_graph(name)
    assert loop_counts(g, 8) == [brute_force_loops(g, 2 * k) for k in range(9)]


@pytest.mark.parametrize("name", [str(n) for n in default_catalog()])
def test_odd_walks_vanish(name):
    w = walk_counts(build_graph(name), 21)
    assert all(w[k] == 0 for k in range(1, 22, 2))


@pytest.mark.parametrize("name", [str(n) for n in default_catalog()])
def test_loops_equal_powers_of_l_and_norm_bound(name):
    g = build_graph(name)
    L = decompose(g).L.astype(object)
    loops = loop_counts(g, 15)
    power = np.identity(len(L), dtype=object)
    for k in range(16):
        assert power[0, 0] == loops[k]
        assert loops[k] <= 4**k
        power = power @ L


@pytest.mark.parametrize("n", [4, 6, 10, 16])
def test_circulant_base_vertex_does_not_matter(n):
    g = build_graph(f"A1ext({n})")
    base = [brute_force_loops(g, 2 * k, 0) for k in range(8)]
    for v in range(n):
        assert [brute_force_loops(g, 2 * k, v) for k in range(8)] == base


# truncations -------------------------------------------------------------------------


def test_truncation_shapes():
    assert truncate_infinite("AInf", 30).vertex_count == 30
    azz = truncate_infinite("AZZ", 20)
    assert azz.vertex_count == 40 and all(azz.degree(v) == 2 for v in range(40))
    dinf = truncate_infinite("DInf", 25)
    assert dinf.vertex_count == 25
    nb = int(np.nonzero(dinf.adjacency[0])[0][0])
    assert dinf.degree(0) == 1 and dinf.degree(nb) == 3


@given(st.integers(min_value=1, max_value=40))
def test_long_path_gives_catalan(m):
    g = truncate_infinite("AInf", m)
    for k in range(m):
        if 2 * k < m:
            assert loop_count(g, 2 * k) == catalan(k)


@pytest.mark.parametrize("tag", ["AInf", "DInf", "AZZ"])
def test_truncations_are_stable_inside_window(tag):
    k = 10
    small = loop_counts(truncate_infinite(tag, 2 * k + 2), k)
    large = loop_counts(truncate_infinite(tag, 4 * k + 8), k)
    assert small == large
