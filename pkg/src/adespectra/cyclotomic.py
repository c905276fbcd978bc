"""Decide whether a T-series is a rational combination of cyclotomic atoms.

For a period ``N`` the candidate atoms are ``d_n`` (``n | N``) and
``alpha*d_m`` (``m | N``, ``m >= 2``).  Multiplying every T-series by
``(1-q)(1-q^N)`` turns the question into linear algebra on palindromic
polynomials of degree ``N``, so only the coefficients ``c_0 .. c_{N//2}``
matter.  The answer is either exact coefficients or a left-kernel vector
``lam`` of the system with ``lam . rhs != 0`` (a Farkas-style certificate).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Any, Callable, Sequence

from .algebra import Poly, RationalFunction, frac_str, ratfun_equal
from .errors import ConsistencyError, NotRootOfUnitySupportedError, PeriodError
from .graphs import GraphName, build_graph
from .measures import CycloMeasure, MeasureAtom, atom_t_series, measure_t_series
from .series import series_bundle

DEFAULT_PERIOD_BOUND = 120


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def basis_atoms(period: int) -> list[MeasureAtom]:
    """``d_n`` for every divisor, then ``alpha*d_m`` for every divisor ``m >= 2``."""
    ds = divisors(period)
    return [MeasureAtom("UniformRoots", n) for n in ds] + [
        MeasureAtom("AlphaRoots", m) for m in ds if m >= 2
    ]


def row_label(atom: MeasureAtom) -> str:
    return f"{'P' if atom.kind == 'UniformRoots' else 'Q'}_{atom.n}"


def _cleared(t: RationalFunction, period: int) -> Poly | None:
    """``(1-q)(1-q^N) t`` as a polynomial of degree <= N, or None."""
    mult = Poly.one_minus_x_pow(1) * Poly.one_minus_x_pow(period)
    num = t.num * mult
    quo, rem = divmod(num, t.den)
    if not rem.is_zero() or quo.degree > period:
        return None
    return quo


@dataclass(frozen=True)
class DecompositionProblem:
    target_T: RationalFunction
    period: int

    def __post_init__(self):
        if self.period < 1:
            raise PeriodError("period must be a positive integer")

    @property
    def basis(self) -> list[MeasureAtom]:
        return basis_atoms(self.period)


@dataclass(frozen=True)
class SystemMatrix:
    """One row per basis atom (``P_n`` or ``Q_m``) plus the target row ``R``.

    ``rows[i][k]`` is the coefficient of ``q^k`` for ``k <= N // 2``.
    """

    period: int
    basis: tuple[MeasureAtom, ...]
    rows: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]
    polys: tuple[Poly, ...] = field(repr=False, default=())
    rhs_poly: Poly | None = field(repr=False, default=None)

    @property
    def labels(self) -> list[str]:
        return [row_label(a) for a in self.basis]

    @property
    def columns(self) -> list[str]:
        return [f"c_{k}" for k in range(len(self.rhs))]

    def as_table(self) -> dict[str, list[Fraction]]:
        table = {lab: list(r) for lab, r in zip(self.labels, self.rows)}
        table["R"] = list(self.rhs)
        return table


def _half_coeffs(p: Poly, period: int) -> tuple[Fraction, ...]:
    full = [p[k] for k in range(period + 1)]
    if any(full[k] != full[period - k] for k in range(period + 1)):
        raise ConsistencyError(f"polynomial {p.format()} is not palindromic of degree {period}")
    return tuple(Fraction(c) for c in full[: period // 2 + 1])


def build_system(problem: DecompositionProblem) -> SystemMatrix:
    n = problem.period
    target = _cleared(problem.target_T, n)
    if target is None:
        raise PeriodError(f"(1-q)(1-q^{n}) T is not a polynomial of degree <= {n}")
    basis = problem.basis
    polys = []
    for atom in basis:
        p = _cleared(atom_t_series(atom), n)
        if p is None:
            raise ConsistencyError(f"basis row {row_label(atom)} does not clear for period {n}")
        polys.append(p)
    rows = tuple(_half_coeffs(p, n) for p in polys)
    rhs = _half_coeffs(target, n)
    return SystemMatrix(n, tuple(basis), rows, rhs, tuple(polys), target)


# exact linear algebra ------------------------------------------------------------


def rref(matrix: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[Fraction(x) for x in row] for row in matrix]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def _solve_columns(cols: list[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve ``sum x_j cols[j] = rhs``; free variables are set to zero."""
    n_eq = len(rhs)
    aug = [[cols[j][i] for j in range(len(cols))] + [rhs[i]] for i in range(n_eq)]
    red, pivots = rref(aug)
    width = len(cols)
    if width in pivots:
        return None
    x = [Fraction(0)] * width
    for i, c in enumerate(pivots):
        x[c] = red[i][width]
    return x


def nullspace(matrix: Sequence[Sequence[Fraction]], width: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : matrix x = 0}``."""
    if not matrix:
        n = width or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, pivots = rref(matrix)
    n = len(matrix[0])
    basis = []
    for f in (c for c in range(n) if c not in pivots):
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -red[i][f]
        basis.append(v)
    return basis


def _primitive(v: list[Fraction]) -> list[Fraction]:
    # integer entries with gcd 1 and a positive first nonzero entry
    lcm = 1
    for x in v:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in v]
    g = reduce(gcd, ints, 0) or 1
    lead = next((x for x in ints if x), 1)
    sign = 1 if lead > 0 else -1
    return [Fraction(sign * x, g) for x in ints]


def _combine(mu: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    return [sum((m * v[i] for m, v in zip(mu, vectors)), Fraction(0)) for i in range(len(vectors[0]))]


def _support(v: Sequence[Fraction]) -> tuple[int, ...]:
    return tuple(i for i, x in enumerate(v) if x != 0)


def sparsest_solution(
    cols: list[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    tie_key: Callable[[tuple[int, ...]], Any] = lambda supp: supp,
) -> list[Fraction] | None:
    """A solution of ``sum x_j cols[j] = rhs`` with the fewest nonzero ``x_j``.

    Every minimum-support solution is pinned down by forcing ``nullity``
    suitably chosen coordinates to zero, so it suffices to try those
    coordinate sets.  Ties between supports are broken by ``tie_key``.
    """
    x0 = _solve_columns(cols, rhs)
    if x0 is None:
        return None
    n_eq = len(rhs)
    kernel = nullspace([[c[i] for c in cols] for i in range(n_eq)], len(cols))
    k = len(kernel)
    if k == 0:
        return x0
    best, best_key = x0, None
    for zeros in combinations(range(len(cols)), k):
        # solve x0_z + sum mu_i kernel_i[z] = 0 for z in zeros
        aug = [[v[z] for v in kernel] + [-x0[z]] for z in zeros]
        red, pivots = rref(aug)
        if len(pivots) < k or k in pivots:
            continue
        mu = [red[i][k] for i in range(k)]
        x = [a + b for a, b in zip(x0, _combine(mu, kernel))]
        supp = _support(x)
        key = (len(supp), tie_key(supp))
        if best_key is None or key < best_key:
            best, best_key = x, key
    return best


def minimal_witness(
    cols: list[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> list[Fraction] | None:
    """``lam`` with ``lam . col = 0`` for every column and ``lam . rhs != 0``.

    A minimum-support certificate is always a circuit of the left kernel, so
    the search runs over coordinate sets of size ``dim - 1`` on which the
    kernel vector must vanish.
    """
    kernel = nullspace([list(c) for c in cols], len(rhs)) if cols else nullspace([], len(rhs))
    d = len(kernel)
    if d == 0:
        return None
    best, best_key = None, None
    for zeros in combinations(range(len(rhs)), d - 1):
        mus = nullspace([[v[z] for v in kernel] for z in zeros], d) if zeros else [[Fraction(1)]]
        if len(mus) != 1:
            continue
        lam = _combine(mus[0], kernel)
        if sum(l * b for l, b in zip(lam, rhs)) == 0:
            continue
        supp = _support(lam)
        key = (len(supp), supp)
        if best_key is None or key < best_key:
            best, best_key = _primitive(lam), key
    return best


@dataclass(frozen=True)
class Decomposition:
    feasible: bool
    period: int
    basis: tuple[MeasureAtom, ...]
    coefficients: dict[MeasureAtom, Fraction] | None = None
    rref_solution: dict[MeasureAtom, Fraction] | None = None
    nullity: int = 0
    witness: dict[str, Fraction] | None = None

    @property
    def measure(self) -> CycloMeasure | None:
        return CycloMeasure(self.coefficients) if self.feasible else None

    def summary(self) -> str:
        if self.feasible:
            return f"feasible (period {self.period}): {self.measure}"
        return f"infeasible (period {self.period})"

    def to_json(self) -> dict:
        out: dict = {"feasible": self.feasible, "period": self.period}
        if self.feasible:
            out["coefficients"] = self.measure.to_json()
            out["rref_solution"] = CycloMeasure(self.rref_solution).to_json()
            out["nullity"] = self.nullity
        else:
            out["witness"] = {k: frac_str(v) for k, v in self.witness.items()}
        return out


def _support_rank(basis: Sequence[MeasureAtom], supp: tuple[int, ...]) -> tuple:
    # smallest top order first; then favour high orders, and d_n over alpha*d_n
    atoms = sorted(((basis[j].n, not basis[j].is_alpha) for j in supp), reverse=True)
    top = atoms[0][0] if atoms else 0
    return (top, [(-n, -u) for n, u in atoms])


def solve(system: SystemMatrix) -> Decomposition:
    """Exact elimination on the reduced system.

    When the atoms are linearly dependent the solution is not unique.  The
    reported ``coefficients`` have minimum support (ties: see
    :func:`_support_rank`); ``rref_solution`` is plain back-substitution with free
    variables at zero, and ``nullity`` is the dimension of the solution set.
    An infeasible system gets a certificate of minimum support.
    """
    cols = list(system.rows)
    rhs = system.rhs
    basis = system.basis
    x = _solve_columns(cols, rhs)
    if x is not None:
        _, pivots = rref([[c[i] for c in cols] for i in range(len(rhs))])
        sparse = sparsest_solution(cols, rhs, lambda supp: _support_rank(basis, supp))
        return Decomposition(
            True,
            system.period,
            basis,
            coefficients={a: v for a, v in zip(basis, sparse) if v != 0},
            rref_solution={a: v for a, v in zip(basis, x) if v != 0},
            nullity=len(cols) - len(pivots),
        )
    lam = minimal_witness(cols, rhs)
    if lam is None:
        raise ConsistencyError("elimination reported infeasible but no certificate exists")
    witness = {f"c_{i}": v for i, v in enumerate(lam) if v != 0}
    return Decomposition(False, system.period, basis, witness=witness)


def verify_witness(system: SystemMatrix, witness: dict[str, Fraction]) -> bool:
    """``lam^T A = 0`` and ``lam^T b != 0`` by direct multiplication."""
    idx = {f"c_{k}": k for k in range(len(system.rhs))}
    lam = [(idx[k], Fraction(v)) for k, v in witness.items()]
    if any(sum(v * row[i] for i, v in lam) != 0 for row in system.rows):
        return False
    return sum(v * system.rhs[i] for i, v in lam) != 0


def verify_decomposition(target: RationalFunction, dec: Decomposition) -> bool:
    if not dec.feasible:
        return False
    return all(
        ratfun_equal(measure_t_series(CycloMeasure(c)), target)
        for c in (dec.coefficients, dec.rref_solution)
    )


def infer_period(t: RationalFunction, bound: int = DEFAULT_PERIOD_BOUND) -> int:
    for n in range(1, bound + 1):
        if _cleared(t, n) is not None:
            return n
    raise NotRootOfUnitySupportedError(f"no period up to {bound} clears {t.format()}")


def decompose(t: RationalFunction, period: int | None = None) -> tuple[SystemMatrix, Decomposition]:
    n = infer_period(t) if period is None else period
    system = build_system(DecompositionProblem(t, n))
    return system, solve(system)


def decompose_graph(name: GraphName | str, period: int | None = None) -> Decomposition:
    g = build_graph(GraphName.parse(name))
    t = series_bundle(g, 0).t_series
    return decompose(t, period)[1]
