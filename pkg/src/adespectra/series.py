"""Poincare series, Jones Theta-series and T-series of a finite graph.

The Poincare series is the (1,1) entry of the resolvent of the even block
``L`` of ``Delta^2``; by Cramer's rule::

    f(z) = det(1 - z K) / det(1 - z L)

with ``K`` equal to ``L`` minus its first row and column.  The Jones series
and the T-series follow by exact substitution::

    Theta(q) = q + (1-q)/(1+q) * f(q/(1+q)^2)
    T(q)     = (Theta(q) - q) / (1 - q)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .algebra import (
    Poly,
    PowerSeries,
    RationalFunction,
    det,
    series_expand,
    substitute_z,
)
from .graphs import BipartiteDecomposition, BipartiteGraph, decompose, walk_counts

DEFAULT_ORDER = 40

_Q = RationalFunction.x()


def _one_minus_z_times(matrix) -> list[list[Poly]]:
    n = len(matrix)
    z = Poly.x()
    return [
        [(1 if i == j else 0) - z * int(matrix[i][j]) for j in range(n)] for i in range(n)
    ]


def resolvent_denominator(d: BipartiteDecomposition) -> Poly:
    """``det(1 - z L)``."""
    return det(_one_minus_z_times(d.L), one=Poly.const(1))


def poincare_resolvent(d: BipartiteDecomposition) -> RationalFunction:
    L = d.L
    K = L[1:, 1:]
    num = det(_one_minus_z_times(K), one=Poly.const(1))
    return RationalFunction(num, resolvent_denominator(d))


def jones_theta(f: RationalFunction) -> RationalFunction:
    return _Q + (1 - _Q) / (1 + _Q) * substitute_z(f)


def t_series(theta: RationalFunction) -> RationalFunction:
    if theta.num[0] != theta.den[0]:
        raise ValueError("a Jones series must satisfy Theta(0) = 1")
    return (theta - _Q) / (1 - _Q)


def theta_from_t(t: RationalFunction) -> RationalFunction:
    return _Q + (1 - _Q) * t


def epsilon_moments(walks: list[int]) -> list[Fraction]:
    """Moments ``int u^n d eps`` of the inversion-symmetric lift of ``mu``.

    ``walks[n]`` is the n-th moment of ``mu``.  Expanding ``(u + 1/u)^n``
    and using ``m_{-j} = m_j`` gives a triangular system in the ``m_n``.
    """
    m: list[Fraction] = []
    for n, mu_n in enumerate(walks):
        if n == 0:
            m.append(Fraction(mu_n))
            continue
        s = Fraction(mu_n)
        for j in range(1, n):
            s -= comb(n, j) * m[abs(n - 2 * j)]
        m.append(s / 2)
    return m


@dataclass(frozen=True)
class SeriesBundle:
    poincare: RationalFunction
    theta: RationalFunction
    t_series: RationalFunction
    stieltjes_mu: PowerSeries
    stieltjes_eps: PowerSeries


def series_bundle(g: BipartiteGraph, order: int = DEFAULT_ORDER) -> SeriesBundle:
    """All series of ``g``.

    The two Stieltjes truncations come from walk counts (matrix powers), not
    from the closed forms, so :func:`verify_stieltjes_links` compares two
    independent computations.
    """
    f = poincare_resolvent(decompose(g))
    theta = jones_theta(f)
    walks = walk_counts(g, order)
    return SeriesBundle(
        poincare=f,
        theta=theta,
        t_series=t_series(theta),
        stieltjes_mu=PowerSeries(walks, order),
        stieltjes_eps=PowerSeries(epsilon_moments(walks), order),
    )


def verify_stieltjes_links(bundle: SeriesBundle, order: int = DEFAULT_ORDER) -> bool:
    """Check ``sigma(z) = f(z^2)`` and ``2 S(q) = Theta(q^2) - q^2 + 1`` through ``order``."""
    half = order // 2
    f_sq = series_expand(bundle.poincare, half).stretch(2)
    sigma = bundle.stieltjes_mu.truncate(order)
    if f_sq.truncate(min(order, f_sq.order)) != sigma.truncate(min(order, f_sq.order)):
        return False
    if order % 2 and sigma[order] != 0:
        return False
    theta_sq = series_expand(bundle.theta, half).stretch(2)
    lhs = bundle.stieltjes_eps.truncate(theta_sq.order) * 2 - 1
    rhs = theta_sq - PowerSeries([0, 0, 1], theta_sq.order)
    if lhs != rhs:
        return False
    if order % 2:
        # Theta(q^2) has no odd terms, so neither may 2S - 1
        return bundle.stieltjes_eps[order] == 0
    return True


def t_from_stieltjes(s: PowerSeries) -> PowerSeries:
    """``(2 S(q^{1/2}) - 1)/(1 - q)`` for an even series ``S``.

    The square root is a re-indexing of the even coefficients; a series with
    a nonzero odd coefficient is rejected.
    """
    if any(c != 0 for c in s.coeffs[1::2]):
        raise ValueError("S(q^(1/2)) needs an even series")
    halved = [2 * c for c in s.coeffs[::2]]
    halved[0] -= 1
    out, acc = [], 0
    for c in halved:
        acc += c
        out.append(acc)
    return PowerSeries(out, s.order // 2)
