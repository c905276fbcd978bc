"""Cyclotomic measures on the unit circle and the graph -> measure catalog.

Four atoms span everything used here:

=================  =====================================================
``UniformCircle``  Haar measure ``d`` on the circle
``UniformRoots(n)`` uniform measure ``d_n`` on the 2n-th roots of unity
``AlphaCircle``    ``alpha * d`` with ``alpha(u) = 2 Im(u)^2``
``AlphaRoots(n)``  ``alpha * d_n``, n >= 2 (``alpha * d_1`` vanishes)
=================  =====================================================

``alpha`` is never evaluated pointwise: since ``alpha(u) = 1 - (u^2 + u^-2)/2``
it acts on moments by ``m_k -> m_k - (m_{k+2} + m_{k-2})/2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Any, Iterable, Mapping

from .algebra import PowerSeries, RationalFunction, as_fraction, frac_str, series_expand
from .errors import CatalogError, RangeError
from .graphs import BipartiteGraph, GraphName, build_graph, loop_counts, truncate_infinite

_Q = RationalFunction.x()

_KINDS = ("UniformCircle", "UniformRoots", "AlphaCircle", "AlphaRoots")
_ATOM_RE = re.compile(r"^(UniformCircle|AlphaCircle|UniformRoots|AlphaRoots)(?:\((\d+)\))?$")


@dataclass(frozen=True, order=True)
class MeasureAtom:
    kind: str
    n: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown atom kind {self.kind!r}")
        if self.kind.endswith("Circle"):
            if self.n:
                raise ValueError(f"{self.kind} takes no parameter")
        elif self.kind == "UniformRoots" and self.n < 1:
            raise RangeError("UniformRoots(n) needs n >= 1")
        elif self.kind == "AlphaRoots" and self.n < 2:
            raise RangeError("AlphaRoots(n) needs n >= 2; alpha*d_1 is the zero measure")

    @property
    def is_alpha(self) -> bool:
        return self.kind.startswith("Alpha")

    def __str__(self):
        return self.kind if self.kind.endswith("Circle") else f"{self.kind}({self.n})"

    @classmethod
    def parse(cls, text: str) -> "MeasureAtom":
        m = _ATOM_RE.match(text.strip())
        if not m:
            raise ValueError(f"cannot parse measure atom {text!r}")
        return cls(m.group(1), int(m.group(2) or 0))

    def short(self) -> str:
        base = {"UniformCircle": "d", "AlphaCircle": "alpha*d"}.get(self.kind)
        if base:
            return base
        return f"d_{self.n}" if self.kind == "UniformRoots" else f"alpha*d_{self.n}"


def _base_moment(atom: MeasureAtom, k: int) -> int:
    if atom.kind in ("UniformCircle", "AlphaCircle"):
        return 1 if k == 0 else 0
    return 1 if k % (2 * atom.n) == 0 else 0


def atom_moment(atom: MeasureAtom, k: int) -> Fraction:
    base = _base_moment(atom, k)
    if not atom.is_alpha:
        return Fraction(base)
    return base - Fraction(_base_moment(atom, k + 2) + _base_moment(atom, k - 2), 2)


def atom_t_series(atom: MeasureAtom) -> RationalFunction:
    n = atom.n
    if atom.kind == "UniformCircle":
        return 1 / (1 - _Q)
    if atom.kind == "AlphaCircle":
        return RationalFunction(1)
    if atom.kind == "UniformRoots":
        return (1 + _Q**n) / ((1 - _Q) * (1 - _Q**n))
    return (1 - _Q ** (n - 1)) / (1 - _Q**n)


class CycloMeasure:
    """Finite rational combination of atoms; immutable."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[MeasureAtom | str, Any] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[MeasureAtom, Fraction] = {}
        for atom, c in items:
            atom = atom if isinstance(atom, MeasureAtom) else MeasureAtom.parse(atom)
            acc[atom] = acc.get(atom, Fraction(0)) + as_fraction(c)
        self._terms = tuple(sorted((a, c) for a, c in acc.items() if c != 0))

    @property
    def terms(self) -> dict[MeasureAtom, Fraction]:
        return dict(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    @property
    def mass(self) -> Fraction:
        return sum((c for _, c in self._terms), Fraction(0))

    def __add__(self, other):
        if not isinstance(other, CycloMeasure):
            return NotImplemented
        return CycloMeasure(list(self._terms) + list(other._terms))

    def __neg__(self):
        return CycloMeasure((a, -c) for a, c in self._terms)

    def __sub__(self, other):
        if not isinstance(other, CycloMeasure):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        try:
            s = as_fraction(scalar)
        except TypeError:
            return NotImplemented
        return CycloMeasure((a, c * s) for a, c in self._terms)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / as_fraction(scalar))

    def __eq__(self, other):
        if not isinstance(other, CycloMeasure):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __repr__(self):
        return f"CycloMeasure({ {str(a): str(c) for a, c in self._terms} })"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for a, c in self._terms:
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = a.short() if mag == 1 else f"{mag}*{a.short()}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def to_json(self) -> dict[str, str]:
        return {str(a): frac_str(c) for a, c in self._terms}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "CycloMeasure":
        return cls({MeasureAtom.parse(k): Fraction(v) for k, v in data.items()})


# constructors ----------------------------------------------------------------


def d() -> CycloMeasure:
    return CycloMeasure({MeasureAtom("UniformCircle"): 1})


def alpha_d() -> CycloMeasure:
    return CycloMeasure({MeasureAtom("AlphaCircle"): 1})


def d_n(n: int) -> CycloMeasure:
    return CycloMeasure({MeasureAtom("UniformRoots", n): 1})


def alpha_d_n(n: int) -> CycloMeasure:
    return CycloMeasure({MeasureAtom("AlphaRoots", n): 1})


def d_prime(n: int) -> CycloMeasure:
    """Uniform measure on the 4n-th roots of unity of odd order: ``2 d_2n - d_n``."""
    return 2 * d_n(2 * n) - d_n(n)


def alpha_d_prime(n: int) -> CycloMeasure:
    if n == 1:
        # alpha*d_1 is the zero measure
        return 2 * alpha_d_n(2)
    return 2 * alpha_d_n(2 * n) - alpha_d_n(n)


# moments and transforms ------------------------------------------------------


def moment(m: CycloMeasure, k: int) -> Fraction:
    """``int u^k dm``."""
    return sum((c * atom_moment(a, k) for a, c in m), Fraction(0))


def pushforward_moment(m: CycloMeasure, k: int) -> Fraction:
    """``int (u + 1/u)^k dm``, the k-th moment of the image measure on [-2, 2]."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return sum((comb(k, j) * moment(m, k - 2 * j) for j in range(k + 1)), Fraction(0))


def pushforward_from_moments(moments: Mapping[int, Fraction] | list, k: int) -> Fraction:
    """Same as :func:`pushforward_moment` for a symmetric moment sequence."""
    return sum((comb(k, j) * moments[abs(k - 2 * j)] for j in range(k + 1)), Fraction(0))


def measure_t_series(m: CycloMeasure) -> RationalFunction:
    total = RationalFunction(0)
    for a, c in m:
        total = total + c * atom_t_series(a)
    return total


def stieltjes_series(m: CycloMeasure, order: int) -> PowerSeries:
    """``S(q) = sum_k int u^k dm q^k`` through ``q^order``."""
    return PowerSeries([moment(m, k) for k in range(order + 1)], order)


def moments_from_t_series(t: RationalFunction, max_k: int) -> list[Fraction]:
    """Moments ``m_0 .. m_{2 max_k}`` of the even measure with T-series ``t``.

    Inverts ``T = (2 S(q^{1/2}) - 1)/(1 - q)``; odd moments are zero.
    """
    s_half = series_expand((1 + (1 - _Q) * t) / 2, max_k)
    out = []
    for j in range(max_k + 1):
        out.append(s_half[j])
        if j < max_k:
            out.append(Fraction(0))
    return out


# catalog ------------------------------------------------------------------------


@dataclass(frozen=True)
class MeasureCatalogEntry:
    graph: GraphName
    measure: CycloMeasure | None
    t_series: RationalFunction | None = None
    formula: str = ""

    @property
    def cyclotomic(self) -> bool:
        return self.measure is not None


def _one_minus(d: int) -> RationalFunction:
    return 1 - _Q**d


# T-series of the two exceptional graphs, which have no cyclotomic measure
E7_T = _one_minus(9) * _one_minus(12) / (_one_minus(4) * _one_minus(18))
E8_T = (
    _one_minus(10) * _one_minus(15) * _one_minus(18) / (_one_minus(5) * _one_minus(9) * _one_minus(30))
)


def catalog_measure(name: GraphName | str) -> MeasureCatalogEntry:
    try:
        name = GraphName.parse(name)
    except ValueError as exc:
        raise CatalogError(str(exc)) from None
    tag, p = name.tag, name.params
    if tag == "A":
        (n,) = p
        m, formula = alpha_d_n(n + 1), f"alpha*d_{n + 1}"
    elif tag == "D":
        (n,) = p
        m, formula = alpha_d_prime(n - 1), f"alpha*d'_{n - 1}"
    elif tag == "A1ext":
        (n,) = p
        m, formula = d_n(n // 2), f"d_{n // 2}"
    elif tag == "D1ext":
        (n,) = p
        m, formula = (d_prime(1) + d_n(n - 2)) / 2, f"(d'_1 + d_{n - 2})/2"
    elif tag == "E6":
        m = alpha_d_n(12) + (d_n(12) - d_n(6) - d_n(4) + d_n(3)) / 2
        formula = "alpha*d_12 + (d_12 - d_6 - d_4 + d_3)/2"
    elif tag == "E6ext":
        m, formula = alpha_d_n(3) + (d_n(2) - d_n(3)) / 2, "alpha*d_3 + (d_2 - d_3)/2"
    elif tag == "E7ext":
        m, formula = alpha_d_n(4) + (d_n(3) - d_n(4)) / 2, "alpha*d_4 + (d_3 - d_4)/2"
    elif tag == "E8ext":
        m, formula = alpha_d_n(6) + (d_n(5) - d_n(6)) / 2, "alpha*d_6 + (d_5 - d_6)/2"
    elif tag == "E7":
        return MeasureCatalogEntry(name, None, E7_T, "eps_7 (not cyclotomic)")
    elif tag == "E8":
        return MeasureCatalogEntry(name, None, E8_T, "eps_8 (not cyclotomic)")
    elif tag == "AInf":
        m, formula = alpha_d(), "alpha*d"
    elif tag == "AZZ":
        m, formula = d(), "d"
    elif tag == "DInf":
        m, formula = (d_prime(1) + d()) / 2, "(d'_1 + d)/2"
    else:
        raise CatalogError(f"{name} has no catalog measure")
    return MeasureCatalogEntry(name, m, measure_t_series(m), formula)


def verify_measure(g: BipartiteGraph | GraphName | str, m: CycloMeasure, k_max: int = 20) -> bool:
    """True iff the pushforward moments of ``m`` equal the loop counts through ``2 k_max``.

    Infinite graphs are replaced by a truncation large enough that no walk of
    length ``2 k_max`` can tell the difference.
    """
    if not isinstance(g, BipartiteGraph):
        name = GraphName.parse(g)
        g = build_graph(name) if name.is_finite else truncate_infinite(name, 2 * k_max + 2)
    loops = loop_counts(g, k_max)
    return all(pushforward_moment(m, 2 * k) == loops[k] for k in range(k_max + 1))


# display helpers -----------------------------------------------------------------


def point_weights(m: CycloMeasure, digits: int = 20) -> dict:
    """Mass at each root of unity, for display only.

    Returns ``{"points": [(t, weight), ...], "continuous": {...}}`` where the
    point is ``exp(2 pi i t)`` and weights are mpmath decimals rendered at
    ``digits`` significant digits.  Nothing in the package computes with
    these numbers.
    """
    import mpmath

    with mpmath.workdps(digits + 10):
        weights: dict[Fraction, Any] = {}
        continuous: dict[str, str] = {}
        for a, c in m:
            if a.kind.endswith("Circle"):
                continuous[a.short()] = frac_str(c)
                continue
            n = a.n
            for j in range(2 * n):
                t = Fraction(j, 2 * n)
                if a.is_alpha:
                    w = 2 * mpmath.sin(mpmath.pi * j / n) ** 2 / (2 * n)
                else:
                    w = mpmath.mpf(1) / (2 * n)
                weights[t] = weights.get(t, mpmath.mpf(0)) + mpmath.mpf(c.numerator) / c.denominator * w
        points = [
            (t, mpmath.nstr(w, digits, min_fixed=-mpmath.inf, max_fixed=mpmath.inf))
            for t, w in sorted(weights.items())
            if abs(w) > mpmath.mpf(10) ** (-digits)
        ]
    return {"points": points, "continuous": continuous}
