"""Closed-form Jones series for families of graphs grown by a tail.

Two growth patterns are handled:

``a_tail``
    ``X_k`` is a seed graph ``Gamma`` with an A-type tail of length ``2k``
    ending at the distinguished vertex.
``fork_tail``
    ``X_k`` ends in a fork (two pendant vertices, one of them distinguished)
    joined to ``Gamma`` by a tail of length ``2k``.

Both reduce to one rational function ``P`` in ``q``, computed from two
characteristic polynomials of the seed's even block ``L0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .algebra import LaurentPoly, Poly, RationalFunction, poly_det, y_of_q
from .errors import ShapeError
from .graphs import BipartiteGraph, GraphName, build_graph, decompose
from .series import jones_theta, poincare_resolvent, theta_from_t

A_TAIL = "a_tail"
FORK_TAIL = "fork_tail"

_Q = RationalFunction.x()
_QL = LaurentPoly.monomial(1)
_QINV = LaurentPoly.monomial(-1)

Matrix = tuple[tuple[int, ...], ...]


def _as_matrix(m) -> Matrix:
    return tuple(tuple(int(v) for v in row) for row in np.asarray(m, dtype=object).tolist())


def _char(matrix: Sequence[Sequence[int]]) -> LaurentPoly:
    """``det(y - matrix)`` at ``y = 2 + q + 1/q``."""
    y = y_of_q()
    n = len(matrix)
    return poly_det(
        [[(y if i == j else 0) - matrix[i][j] for j in range(n)] for i in range(n)]
    )


def _drop_first(m: Matrix, count: int = 1) -> Matrix:
    return tuple(row[count:] for row in m[count:])


def _bump_first(m: Matrix) -> Matrix:
    if not m:
        return m
    rows = [list(r) for r in m]
    rows[0][0] += 1
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class TailFamily:
    kind: str
    L0: Matrix
    P0: LaurentPoly
    P1: LaurentPoly
    P: RationalFunction

    @property
    def p_plus(self) -> LaurentPoly:
        return self.P1 - _QL * self.P0

    @property
    def p_minus(self) -> LaurentPoly:
        return self.P1 - _QINV * self.P0

    def is_monomial(self) -> bool:
        return self.P.den.is_constant() and sum(1 for c in self.P.num if c) == 1


def tail_family(L0, kind: str = A_TAIL) -> TailFamily:
    m = _as_matrix(L0)
    n = len(m)
    if any(len(r) != n for r in m):
        raise ShapeError("L0 must be square")
    if any(m[i][j] != m[j][i] for i in range(n) for j in range(n)):
        raise ShapeError("L0 must be symmetric")
    if kind == A_TAIL:
        if n == 0:
            raise ShapeError("L0 must have at least one row")
        base = m
    elif kind == FORK_TAIL:
        if n < 2:
            raise ShapeError("a fork seed needs at least two rows")
        if m[0] != m[1] or m[0][0] != 1:
            raise ShapeError("fork seed: the first two rows must be the identical fork rows")
        base = _drop_first(m)
    else:
        raise ValueError(f"unknown tail kind {kind!r}")
    P0 = _char(_drop_first(base))
    P1 = _char(_bump_first(base))
    # P = (P1 - P0/q) / (P1 - q P0); to_ratfun clears the q-powers on both sides
    P = (P1 - _QINV * P0).to_ratfun() / (P1 - _QL * P0).to_ratfun()
    return TailFamily(kind, m, P0, P1, P)


def family_t(fam: TailFamily, k: int) -> RationalFunction:
    """T-series of ``X_k``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    P = fam.P
    if fam.kind == A_TAIL:
        return (1 - P * _Q ** (2 * k)) / (1 - P * _Q ** (2 * k + 1))
    theta_minus_q = (1 - P * _Q ** (2 * k + 1)) / ((1 + P * _Q ** (2 * k)) * (1 + _Q))
    return theta_minus_q / (1 - _Q)


def family_theta(fam: TailFamily, k: int) -> RationalFunction:
    return theta_from_t(family_t(fam, k))


@dataclass(frozen=True)
class FamilyCheck:
    ok: bool
    failing_k: int | None = None

    def __bool__(self):
        return self.ok


def verify_family(
    fam: TailFamily, builder: Callable[[int], BipartiteGraph], k_max: int, k_min: int = 0
) -> FamilyCheck:
    """Compare the closed form with the resolvent Theta of ``builder(k)``."""
    for k in range(k_min, k_max + 1):
        direct = jones_theta(poincare_resolvent(decompose(builder(k))))
        if family_theta(fam, k) != direct:
            return FamilyCheck(False, k)
    return FamilyCheck(True)


# explicit per-k matrices ---------------------------------------------------


def assemble_L(fam: TailFamily, k: int) -> Matrix:
    """Even block ``L_k`` of ``X_k``, assembled from ``L0`` by adding the tail."""
    L0 = fam.L0
    if k == 0:
        return L0
    n0 = len(L0)
    if fam.kind == A_TAIL:
        size = n0 + k
        L = [[0] * size for _ in range(size)]
        for i in range(k):
            L[i][i] = 1 if i == 0 else 2
            L[i][i + 1] = L[i + 1][i] = 1
        for i in range(n0):
            for j in range(n0):
                L[k + i][k + j] = L0[i][j]
        L[k][k] += 1
        return _as_matrix(L)
    # fork: rows 0,1 are the fork, 2..k+1 the tail, then the rest of L0
    size = n0 + k
    L = [[0] * size for _ in range(size)]
    for i in (0, 1):
        for j in (0, 1, 2):
            L[i][j] = L[j][i] = 1
    for t in range(2, k + 2):
        L[t][t] = 2
        if t < k + 1:
            L[t][t + 1] = L[t + 1][t] = 1
    last = k + 1
    for j in range(2, n0):
        L[last][k + j] = L[k + j][last] = L0[0][j]
        for i in range(2, n0):
            L[k + i][k + j] = L0[i][j]
    return _as_matrix(L)


@dataclass(frozen=True)
class RecursionTriple:
    """Characteristic polynomials of ``X_k`` at ``y = 2 + q + 1/q``.

    For an A-tail ``p = det(y - K_k)`` and ``q = det(y - L_k)``; for a fork
    ``p = det(y - J_k)``, ``q = det(y - K_k)`` and ``r = det(y - L_k)``.
    """

    p: LaurentPoly
    q: LaurentPoly
    r: LaurentPoly | None = None


def assembled_triple(fam: TailFamily, k: int) -> RecursionTriple:
    L = assemble_L(fam, k)
    if fam.kind == A_TAIL:
        return RecursionTriple(_char(_drop_first(L)), _char(L))
    return RecursionTriple(_char(_drop_first(L, 2)), _char(_drop_first(L)), _char(L))


def closed_triple(fam: TailFamily, k: int) -> tuple[RationalFunction, ...]:
    """The same polynomials from ``P+`` and ``P-`` alone, as rational functions."""
    pp, pm = fam.p_plus.to_ratfun(), fam.p_minus.to_ratfun()
    up, down = _Q ** (-k), _Q**k
    p_k = (up * pp - down * pm) / (1 / _Q - _Q)
    q_k = (up * pp - down * _Q * pm) / (1 - _Q)
    if fam.kind == A_TAIL:
        return p_k, q_k
    r_k = (up * pp + down * pm) / (_Q / (1 + _Q) ** 2)
    return p_k, q_k, r_k


# seeds ----------------------------------------------------------------------


@dataclass(frozen=True)
class Seed:
    name: str
    kind: str
    L0: Matrix
    graph: Callable[[int], str]
    description: str


def _ones(n: int) -> Matrix:
    return tuple((1,) * n for _ in range(n))


SEEDS: dict[str, Seed] = {
    s.name: s
    for s in [
        Seed("A_even", A_TAIL, ((1,),), lambda k: f"A({2 * k + 2})", "A(2k+2)"),
        Seed("A_odd", A_TAIL, _ones(2), lambda k: f"A({2 * k + 3})", "A(2k+3)"),
        Seed("D_odd", A_TAIL, ((2,),), lambda k: f"D({2 * k + 3})", "D(2k+3)"),
        Seed("D_even", A_TAIL, _ones(3), lambda k: f"D({2 * k + 4})", "D(2k+4)"),
        Seed("F21_even", A_TAIL, ((2, 1), (1, 1)), lambda k: f"F(2,1,{2 * k})", "F(2,1,2k)"),
        Seed(
            "F21_odd",
            A_TAIL,
            ((1, 1, 1), (1, 1, 1), (1, 1, 2)),
            lambda k: f"F(2,1,{2 * k + 1})",
            "F(2,1,2k+1)",
        ),
        Seed(
            "F22_even",
            A_TAIL,
            ((2, 1, 1), (1, 1, 0), (1, 0, 1)),
            lambda k: f"F(2,2,{2 * k})",
            "F(2,2,2k)",
        ),
        Seed(
            "F31_odd",
            A_TAIL,
            ((1, 1, 1, 0), (1, 1, 1, 0), (1, 1, 2, 1), (0, 0, 1, 1)),
            lambda k: f"F(3,1,{2 * k + 1})",
            "F(3,1,2k+1)",
        ),
        Seed("D1ext_even", FORK_TAIL, _ones(4), lambda k: f"D1ext({2 * k + 4})", "D1ext(2k+4)"),
        Seed(
            "D1ext_odd",
            FORK_TAIL,
            ((1, 1, 1), (1, 1, 1), (1, 1, 3)),
            lambda k: f"D1ext({2 * k + 5})",
            "D1ext(2k+5)",
        ),
    ]
}


def seed_family(name: str) -> TailFamily:
    seed = SEEDS[name]
    return tail_family(seed.L0, seed.kind)


def seed_builder(name: str) -> Callable[[int], BipartiteGraph]:
    seed = SEEDS[name]
    return lambda k: build_graph(GraphName.parse(seed.graph(k)))


# cyclotomic factor bookkeeping ---------------------------------------------


_CYCLO_CACHE: dict[int, Poly] = {}


def cyclotomic_poly(n: int) -> Poly:
    """The n-th cyclotomic polynomial."""
    if n not in _CYCLO_CACHE:
        p = Poly.monomial(n) - 1
        for d in range(1, n):
            if n % d == 0:
                p = p.exact_div(cyclotomic_poly(d))
        _CYCLO_CACHE[n] = p
    return _CYCLO_CACHE[n]


def _totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _cyclotomic_content(p: Poly) -> tuple[dict[int, int], Poly]:
    counts: dict[int, int] = {}
    deg = int(p.degree)
    # phi(n) >= sqrt(n/2), so every candidate index is below 2 deg^2 + 2
    for n in range(2 * deg * deg + 2, 0, -1):
        if p.degree < 1:
            break
        if _totient(n) > p.degree:
            continue
        c = cyclotomic_poly(n)
        while True:
            quo, rem = divmod(p, c)
            if rem:
                break
            p = quo
            counts[n] = counts.get(n, 0) + 1
    return counts, p


@dataclass(frozen=True)
class CycloFactorization:
    """``f = residual * prod (1 - q^d)^e`` with ``factors = [(d, e), ...]``."""

    factors: tuple[tuple[int, int], ...]
    residual: RationalFunction

    def format(self, var: str = "q") -> str:
        def block(items):
            out = ""
            for d, e in items:
                f = f"(1-{var})" if d == 1 else f"(1-{var}^{d})"
                out += f if e == 1 else f"{f}^{e}"
            return out

        num = [(d, e) for d, e in self.factors if e > 0]
        den = [(d, -e) for d, e in self.factors if e < 0]
        res = self.residual
        top = block(num)
        if not res.num.is_constant() or res.num[0] != 1 or not top:
            r = res.num.format(var)
            if res.num.is_constant() and top:
                top = top if r == "1" else f"{r}*{top}"
            else:
                top = f"({r}){top}" if top else (r if res.num.is_constant() else f"({r})")
        bottom = block(den)
        if not res.den.is_constant():
            bottom = f"({res.den.format(var)}){bottom}"
        if not bottom:
            return top
        if len(den) == 1 and res.den.is_constant():
            return f"{top}/{bottom}"
        return f"{top}/({bottom})"


def _greedy_divide(p: Poly) -> tuple[dict[int, int], Poly]:
    found: dict[int, int] = {}
    for d in range(int(p.degree), 0, -1):
        f = Poly.one_minus_x_pow(d)
        while p.degree >= d:
            quo, rem = divmod(p, f)
            if rem:
                break
            p = quo
            found[d] = found.get(d, 0) + 1
    return found, p


def cyclotomic_simplify(f) -> CycloFactorization:
    """Write ``f`` as a product of powers of ``1 - q^d`` times a residual.

    Cyclotomic factors of numerator and denominator are collected and
    Mobius-inverted over divisibility, which recovers forms such as
    ``(1-q^6)(1-q^8)/((1-q^3)(1-q^12))``.  A polynomial whose inversion
    would need denominators is instead divided greedily by ``1 - q^d``,
    ``d`` descending, and whatever does not divide stays in the residual.
    """
    f = f if isinstance(f, RationalFunction) else RationalFunction(f)
    if f.num.is_zero():
        return CycloFactorization((), f)
    cn, rn = _cyclotomic_content(f.num)
    cd, rd = _cyclotomic_content(f.den)
    net = dict(cn)
    for n, e in cd.items():
        net[n] = net.get(n, 0) - e
    # solve sum_{n | d} e_d = net[n] for every n, largest index first
    exps: dict[int, int] = {}
    top = max((n for n, e in net.items() if e), default=0)
    for n in range(top, 0, -1):
        e = net.get(n, 0) - sum(v for d, v in exps.items() if d % n == 0)
        if e:
            exps[n] = e
    if f.is_polynomial() and any(e < 0 for e in exps.values()):
        found, rest = _greedy_divide(f.num)
        return CycloFactorization(tuple(sorted(found.items())), RationalFunction(rest, f.den))
    # (1 - q^d) = -prod Phi_n, so track the sign in the residual
    sign = -1 if sum(exps.values()) % 2 else 1
    residual = RationalFunction(rn * sign, rd)
    return CycloFactorization(tuple(sorted(exps.items())), residual)
