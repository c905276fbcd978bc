"""The (extended) ADE graph catalog and loop counting at the distinguished vertex.

Vertices are always ordered distinguished-first and then breadth first, so
index 0 is the vertex loops are based at and parity is BFS depth mod 2.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphNameError, NotFiniteError, ParityError, RangeError

FINITE_TAGS = ("A", "D", "E6", "E7", "E8", "A1ext", "D1ext", "E6ext", "E7ext", "E8ext", "F")
SYMBOLIC_TAGS = ("AInf", "DInf", "AZZ")

_ARITY = {"A": 1, "D": 1, "A1ext": 1, "D1ext": 1, "F": 3}
_CANON = {t.lower(): t for t in FINITE_TAGS + SYMBOLIC_TAGS}
_NAME_RE = re.compile(r"^([a-z0-9]+?)(?:\(([0-9,]*)\))?$")

# E-type graphs as triple-point graphs F(a, b, c).
E_AS_F = {
    "E6": (2, 1, 2),
    "E7": (2, 1, 3),
    "E8": (2, 1, 4),
    "E6ext": (2, 2, 2),
    "E7ext": (3, 1, 3),
    "E8ext": (2, 1, 5),
}


@dataclass(frozen=True)
class GraphName:
    tag: str
    params: tuple[int, ...] = ()

    def __post_init__(self):
        if self.tag not in _CANON.values():
            raise GraphNameError(f"unknown graph tag {self.tag!r}")
        if len(self.params) != _ARITY.get(self.tag, 0):
            raise GraphNameError(f"{self.tag} takes {_ARITY.get(self.tag, 0)} parameter(s)")
        _check_range(self.tag, self.params)

    @property
    def is_finite(self) -> bool:
        return self.tag not in SYMBOLIC_TAGS

    def __str__(self):
        if not self.params:
            return self.tag
        return f"{self.tag}({','.join(map(str, self.params))})"

    @classmethod
    def parse(cls, text: "str | GraphName") -> "GraphName":
        """Parse names like ``A(4)``, ``e6ext``, ``F(2,1,3)`` (case-insensitive)."""
        if isinstance(text, GraphName):
            return text
        m = _NAME_RE.match(text.strip().lower())
        if not m or m.group(1) not in _CANON:
            raise GraphNameError(f"cannot parse graph name {text!r}")
        tag = _CANON[m.group(1)]
        raw = m.group(2)
        try:
            params = tuple(int(p) for p in raw.split(",")) if raw else ()
        except ValueError:
            raise GraphNameError(f"bad parameters in {text!r}") from None
        return cls(tag, params)


def _check_range(tag: str, params: tuple[int, ...]) -> None:
    lows = {"A": (1,), "D": (3,), "D1ext": (4,), "F": (1, 1, 0)}
    if tag in lows:
        if any(p < lo for p, lo in zip(params, lows[tag])):
            raise RangeError(f"{tag}{params} is out of range")
    if tag == "A1ext":
        (p,) = params
        # the 2-gon would need a double edge
        if p < 4 or p % 2:
            raise RangeError("A1ext(2n) needs an even vertex count of at least 4")


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    """Connected bipartite graph; vertex 0 is the distinguished vertex."""

    adjacency: np.ndarray
    parity: tuple[int, ...]
    name: str | None = None
    distinguished: int = field(default=0, init=False)

    @property
    def vertex_count(self) -> int:
        return len(self.parity)

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency))
        return list(zip(i.tolist(), j.tolist()))

    def degree(self, v: int) -> int:
        return int(self.adjacency[v].sum())

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[tuple[int, int]],
        distinguished: int = 0,
        name: str | None = None,
    ) -> "BipartiteGraph":
        if vertex_count < 1:
            raise ValueError("a graph needs at least one vertex")
        adj = np.zeros((vertex_count, vertex_count), dtype=np.int64)
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if adj[a, b]:
                raise ValueError(f"multiple edge {a}-{b}")
            adj[a, b] = adj[b, a] = 1
        # breadth-first relabelling from the distinguished vertex
        depth = {distinguished: 0}
        order = [distinguished]
        todo = deque(order)
        while todo:
            v = todo.popleft()
            for w in np.nonzero(adj[v])[0].tolist():
                if w not in depth:
                    depth[w] = depth[v] + 1
                    order.append(w)
                    todo.append(w)
                elif depth[w] % 2 == depth[v] % 2:
                    raise ValueError("graph is not bipartite")
        if len(order) != vertex_count:
            raise ValueError("graph is not connected")
        perm = np.array(order)
        relabelled = adj[np.ix_(perm, perm)]
        relabelled.setflags(write=False)
        return cls(relabelled, tuple(depth[v] % 2 for v in order), name)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "vertex_count": self.vertex_count,
            "distinguished": self.distinguished,
            "edges": [list(e) for e in self.edges()],
            "parity": ["even" if p == 0 else "odd" for p in self.parity],
        }


@dataclass(frozen=True, eq=False)
class BipartiteDecomposition:
    """``M`` (even x odd block of the adjacency), ``L = M M^t`` and ``N = M^t M``."""

    M: np.ndarray
    L: np.ndarray
    N: np.ndarray
    even: tuple[int, ...]
    odd: tuple[int, ...]


def _path(vertices: Sequence[int]) -> list[tuple[int, int]]:
    return list(zip(vertices[:-1], vertices[1:]))


def _triple_point(a: int, b: int, c: int, name: str) -> BipartiteGraph:
    # vertex 0 is the triple point; the c-tail ends at the distinguished vertex
    nxt = 1
    edges = []
    ends = []
    for length in (a, b, c):
        tail = [0] + list(range(nxt, nxt + length))
        edges += _path(tail)
        nxt += length
        ends.append(tail[-1])
    return BipartiteGraph.from_edges(a + b + c + 1, edges, ends[2], name)


def build_graph(name: "GraphName | str") -> BipartiteGraph:
    """Construct a finite catalog graph with its distinguished vertex placed."""
    name = GraphName.parse(name)
    if not name.is_finite:
        raise NotFiniteError(f"{name} is infinite; use truncate_infinite")
    tag, p = name.tag, name.params
    label = str(name)
    if tag == "A":
        (n,) = p
        return BipartiteGraph.from_edges(n, _path(range(n)), 0, label)
    if tag == "D":
        # A-tail 0..n-3 from the distinguished vertex, fork n-2, n-1 at its end
        (n,) = p
        t = n - 3
        edges = _path(range(t + 1)) + [(t, n - 2), (t, n - 1)]
        return BipartiteGraph.from_edges(n, edges, 0, label)
    if tag == "F":
        return _triple_point(*p, label)
    if tag in E_AS_F:
        return _triple_point(*E_AS_F[tag], label)
    if tag == "A1ext":
        (n,) = p
        edges = _path(range(n)) + [(n - 1, 0)]
        return BipartiteGraph.from_edges(n, edges, 0, label)
    if tag == "D1ext":
        # spine 0..n-4 with leaves: distinguished 1 + one more at each end
        (n,) = p
        s = n - 4
        leaves = range(s + 1, s + 5)
        edges = _path(range(s + 1))
        edges += [(0, leaves[0]), (0, leaves[1]), (s, leaves[2]), (s, leaves[3])]
        return BipartiteGraph.from_edges(n + 1, edges, leaves[0], label)
    raise AssertionError(tag)


def truncate_infinite(name: "GraphName | str", size: int) -> BipartiteGraph:
    """Finite stand-in for an infinite graph.

    Loop counts of length ``2k`` only see vertices within distance ``k`` of
    the distinguished vertex, so they agree with the infinite graph for
    ``2k < size``.
    """
    name = GraphName.parse(name)
    if name.is_finite:
        raise TypeError(f"{name} is already finite")
    label = f"{name}[{size}]"
    if name.tag == "AInf":
        if size < 1:
            raise RangeError("truncation size must be positive")
        return BipartiteGraph.from_edges(size, _path(range(size)), 0, label)
    if name.tag == "AZZ":
        if size < 2:
            raise RangeError("AZZ truncation needs size >= 2")
        return BipartiteGraph.from_edges(
            2 * size, _path(range(2 * size)) + [(2 * size - 1, 0)], 0, label
        )
    # DInf: D(size) with the distinguished vertex at a fork end
    if size < 4:
        raise RangeError("DInf truncation needs size >= 4")
    return _triple_point(1, size - 3, 1, label)


def decompose(g: BipartiteGraph) -> BipartiteDecomposition:
    even = tuple(i for i, p in enumerate(g.parity) if p == 0)
    odd = tuple(i for i, p in enumerate(g.parity) if p == 1)
    M = g.adjacency[np.ix_(even, odd)].astype(np.int64)
    return BipartiteDecomposition(M, M @ M.T, M.T @ M, even, odd)


def loop_count(g: BipartiteGraph, length: int) -> int:
    """Number of closed walks of the given even length at the distinguished vertex."""
    if length < 0:
        raise ValueError("loop length must be nonnegative")
    if length % 2:
        raise ParityError("odd loops vanish on a bipartite graph; ask for an even length")
    power = np.linalg.matrix_power(g.adjacency.astype(object), length)
    return int(power[0, 0])


def walk_counts(g: BipartiteGraph, max_length: int) -> list[int]:
    """``(Delta^l)_{11}`` for every ``l <= max_length``, odd lengths included."""
    a = g.adjacency.astype(object)
    v = np.zeros(g.vertex_count, dtype=object)
    v[0] = 1
    out = [1]
    for _ in range(max_length):
        v = a @ v
        out.append(int(v[0]))
    return out


def loop_counts(g: BipartiteGraph, max_k: int) -> list[int]:
    """``[loop(0), loop(2), ..., loop(2 max_k)]``."""
    return walk_counts(g, 2 * max_k)[::2]


def default_catalog() -> list[GraphName]:
    """Every finite graph family at the parameter ranges used for verification."""
    p = GraphName.parse
    names = [p(f"A({n})") for n in range(2, 13)]
    names += [p(f"D({n})") for n in range(4, 13)]
    names += [p("E6"), p("E7"), p("E8")]
    names += [p(f"A1ext({2 * n})") for n in range(2, 9)]
    names += [p(f"D1ext({n})") for n in range(4, 13)]
    names += [p("E6ext"), p("E7ext"), p("E8ext")]
    return names


def symbolic_catalog() -> list[GraphName]:
    return [GraphName(t) for t in SYMBOLIC_TAGS]
