"""Exact one-variable algebra over the rationals.

Everything here is immutable and backed by :class:`fractions.Fraction`:

* :class:`Poly` -- dense polynomials, ``coeffs[i]`` is the coefficient of x**i
* :class:`LaurentPoly` -- polynomials allowing negative exponents
* :class:`RationalFunction` -- reduced quotients of polynomials
* :class:`PowerSeries` -- truncated power series

A single formal variable is used throughout.  Calling it ``z``, ``q`` or
``y`` is purely a naming convention; the substitutions ``y = 2 + q + 1/q``
and ``z = q/(1+q)^2`` are explicit functions (:func:`y_of_q`,
:func:`substitute_z`).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Any, Iterable, Mapping, Sequence

from .errors import DimensionError, PoleAtOriginError

# Degree of the zero polynomial.  Comparisons with ints behave, and
# arithmetic on it can never silently produce a plausible integer.
NEG_INF = -math.inf

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_fraction(c: Any) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, Rational):
        return Fraction(c.numerator, c.denominator)
    raise TypeError(f"cannot use {c!r} as an exact rational coefficient")


def frac_str(c: Fraction) -> str:
    """Render ``c`` as ``"num/den"``, always with an explicit denominator."""
    c = as_fraction(c)
    return f"{c.numerator}/{c.denominator}"


def _format_terms(terms: Iterable[tuple[int, Fraction]], var: str) -> str:
    out = []
    for e, c in terms:
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if e == 0:
            body = str(a)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if a == 1 else f"{a}*{mono}"
        out.append((sign, body))
    if not out:
        return "0"
    first_sign, first = out[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


class Poly:
    """Polynomial with rational coefficients, lowest degree first."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Any] = ()):
        c = [as_fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def _raw(cls, c: tuple) -> "Poly":
        p = object.__new__(cls)
        p._c = c
        return p

    @classmethod
    def const(cls, c: Any) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, exp: int, c: Any = 1) -> "Poly":
        if exp < 0:
            raise ValueError("negative exponent in a polynomial")
        return cls([0] * exp + [c])

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def one_minus_x_pow(cls, d: int) -> "Poly":
        """The polynomial ``1 - x**d``."""
        return cls([1] + [0] * (d - 1) + [-1])

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int | float:
        return len(self._c) - 1 if self._c else NEG_INF

    @property
    def valuation(self) -> int | float:
        """Lowest exponent with a nonzero coefficient (``inf`` for zero)."""
        for i, c in enumerate(self._c):
            if c:
                return i
        return math.inf

    @property
    def lead(self) -> Fraction:
        return self._c[-1] if self._c else _ZERO

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return len(self._c) <= 1

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self._c):
            return self._c[i]
        return _ZERO

    def __iter__(self):
        return iter(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    # arithmetic ------------------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        c = list(a)
        for i, v in enumerate(b):
            c[i] += v
        return Poly(c)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(tuple(-v for v in self._c))

    def __sub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        a, b = self._c, other._c
        if not a or not b:
            return Poly()
        c = [_ZERO] * (len(a) + len(b) - 1)
        bnz = [(j, v) for j, v in enumerate(b) if v]
        for i, u in enumerate(a):
            if u:
                for j, v in bnz:
                    c[i + j] += u * v
        return Poly(c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.const(1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self._c)
        db = len(other._c) - 1
        lb = other._c[-1]
        if len(r) - 1 < db:
            return Poly(), self
        q = [_ZERO] * (len(r) - db)
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i]
            if c:
                f = c / lb
                q[i - db] = f
                for j, v in enumerate(other._c):
                    r[i - db + j] -= f * v
        return Poly(q), Poly(r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        return divmod(_as_poly(other), self)[1].is_zero()

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def monic(self) -> "Poly":
        if not self._c:
            return self
        lead = self._c[-1]
        return Poly._raw(tuple(v / lead for v in self._c))

    def scale(self, c: Any) -> "Poly":
        return Poly(v * as_fraction(c) for v in self._c)

    def shift(self, n: int) -> "Poly":
        """Multiply by x**n (n may be negative if the result stays a polynomial)."""
        if n >= 0:
            return Poly._raw((_ZERO,) * n + self._c) if self._c else self
        if self.valuation < -n:
            raise ValueError("shift would create negative exponents")
        return Poly(self._c[-n:])

    def stretch(self, k: int) -> "Poly":
        """Substitute x -> x**k."""
        if k < 1:
            raise ValueError("stretch factor must be positive")
        c = [_ZERO] * (k * (len(self._c) - 1) + 1) if self._c else []
        for i, v in enumerate(self._c):
            c[k * i] = v
        return Poly(c)

    def __call__(self, x: Any):
        acc: Any = 0
        for v in reversed(self._c):
            acc = acc * x + v
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly()
        for v in reversed(self._c):
            acc = acc * inner + v
        return acc

    def is_palindromic(self, n: int | None = None) -> bool:
        """True if c_k == c_{n-k} for 0 <= k <= n (n defaults to the degree)."""
        if n is None:
            n = len(self._c) - 1
        return all(self[k] == self[n - k] for k in range(n + 1))

    # comparison / hashing -------------------------------------------------

    def __eq__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(("Poly", self._c))

    def __repr__(self):
        return f"Poly([{', '.join(str(c) for c in self._c)}])"

    def format(self, var: str = "q") -> str:
        return _format_terms(enumerate(self._c), var)

    __str__ = format

    def to_json(self) -> list[str]:
        return [frac_str(c) for c in self._c]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "Poly":
        return cls(Fraction(s) for s in data)


def _as_poly(x: Any) -> Poly | None:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
        return Poly.const(x)
    return None


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (zero only if both inputs are zero)."""
    while b:
        a, b = b, a % b
        if b:
            b = b.monic()
    return a.monic()


class LaurentPoly:
    """Laurent polynomial stored as ``x**low * poly`` with ``poly(0) != 0``."""

    __slots__ = ("_low", "_p")

    def __init__(self, coeffs: Poly | Iterable[Any] = (), low: int = 0):
        p = coeffs if isinstance(coeffs, Poly) else Poly(coeffs)
        if p.is_zero():
            self._low, self._p = 0, p
            return
        v = p.valuation
        self._low = low + v
        self._p = p.shift(-v) if v else p

    @classmethod
    def from_dict(cls, terms: Mapping[int, Any]) -> "LaurentPoly":
        terms = {e: c for e, c in terms.items() if c != 0}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        return cls([terms.get(e, 0) for e in range(lo, hi + 1)], lo)

    @classmethod
    def monomial(cls, exp: int, c: Any = 1) -> "LaurentPoly":
        return cls((c,), exp)

    @property
    def low(self) -> int | float:
        return self._low if self._p else math.inf

    @property
    def high(self) -> int | float:
        return self._low + self._p.degree if self._p else NEG_INF

    @property
    def poly(self) -> Poly:
        return self._p

    def coeff(self, e: int) -> Fraction:
        return self._p[e - self._low]

    def terms(self) -> dict[int, Fraction]:
        return {self._low + i: c for i, c in enumerate(self._p) if c}

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def __bool__(self):
        return not self._p.is_zero()

    def __add__(self, other):
        other = _as_laurent(other)
        if other is None:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self._low, other._low)
        a = self._p.shift(self._low - lo)
        b = other._p.shift(other._low - lo)
        return LaurentPoly(a + b, lo)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(-self._p, self._low)

    def __sub__(self, other):
        other = _as_laurent(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_laurent(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_laurent(other)
        if other is None:
            return NotImplemented
        return LaurentPoly(self._p * other._p, self._low + other._low)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._p) == 1:
                return LaurentPoly((1 / self._p[0] ** -n,), self._low * n)
            raise ValueError("only monomials have Laurent inverses")
        return LaurentPoly(self._p**n, self._low * n)

    def __eq__(self, other):
        other = _as_laurent(other)
        if other is None:
            return NotImplemented
        return self._p == other._p and (self._p.is_zero() or self._low == other._low)

    def __hash__(self):
        return hash(("LaurentPoly", self._low if self._p else 0, self._p.coeffs))

    def to_ratfun(self) -> "RationalFunction":
        if self._low >= 0:
            return RationalFunction(self._p.shift(self._low))
        return RationalFunction(self._p, Poly.monomial(-self._low))

    def format(self, var: str = "q") -> str:
        return _format_terms(sorted(self.terms().items()), var)

    __str__ = format

    def __repr__(self):
        return f"LaurentPoly({self.terms()!r})"


def _as_laurent(x: Any) -> LaurentPoly | None:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, Poly):
        return LaurentPoly(x)
    if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
        return LaurentPoly((x,))
    return None


def y_of_q() -> LaurentPoly:
    """The substitution variable ``y = 2 + q + q^-1``."""
    return LaurentPoly((1, 2, 1), -1)


# determinants -------------------------------------------------------------


def det(matrix: Sequence[Sequence[Any]], one: Any = 1) -> Any:
    """Division-free determinant by Laplace expansion along rows.

    Works over any commutative ring whose elements support ``+``, ``-`` and
    ``*``.  Minors are memoised by the set of remaining columns, so the cost
    is O(n 2^n) ring multiplications, plenty for the sizes used here.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        return one
    zero = one - one
    full = (1 << n) - 1

    @lru_cache(maxsize=None)
    def minor(mask: int) -> Any:
        row = n - bin(mask).count("1")
        if row == n:
            return one
        total = zero
        pos = 0
        for j in range(n):
            if mask >> j & 1:
                a = matrix[row][j]
                if a != 0:
                    term = a * minor(mask & ~(1 << j))
                    total = total + term if pos % 2 == 0 else total - term
                pos += 1
        return total

    return minor(full)


def poly_det(matrix: Sequence[Sequence[Any]]) -> LaurentPoly:
    """Exact determinant of a square matrix of Laurent polynomials (or numbers)."""
    lm = [[_as_laurent(a) for a in row] for row in matrix]
    if any(a is None for row in lm for a in row):
        raise TypeError("matrix entries must be numbers or (Laurent) polynomials")
    return det(lm, one=LaurentPoly((1,)))


# rational functions -------------------------------------------------------


class RationalFunction:
    """Quotient ``num/den`` kept in lowest terms.

    Normal form: common factors cancelled and the lowest-degree nonzero
    coefficient of ``den`` equal to 1.  For T-series this keeps
    denominators like ``1 - q^3`` the way they are usually written.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Any = 0, den: Any = 1):
        n = _as_poly(num) if not isinstance(num, LaurentPoly) else None
        d = _as_poly(den) if not isinstance(den, LaurentPoly) else None
        if n is None or d is None:
            rn = _as_ratfun(num)
            rd = _as_ratfun(den)
            if rn is None or rd is None:
                raise TypeError("numerator and denominator must be polynomials")
            n, d = rn.num * rd.den, rn.den * rd.num
        if d.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if n.is_zero():
            self.num, self.den = Poly(), Poly.const(1)
            return
        if not d.is_constant():
            g = poly_gcd(n, d)
            if not g.is_constant():
                n, d = n.exact_div(g), d.exact_div(g)
        s = d[int(d.valuation)]
        if s != 1:
            n, d = n.scale(1 / s), d.scale(1 / s)
        self.num, self.den = n, d

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RationalFunction":
        r = object.__new__(cls)
        r.num, r.den = num, den
        return r

    @classmethod
    def x(cls) -> "RationalFunction":
        return cls._raw(Poly.x(), Poly.const(1))

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __add__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(self.den**-n, self.num**-n)
        return RationalFunction._raw(self.num**n, self.den**n)

    def __call__(self, x: Any):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(x) / d

    def stretch(self, k: int) -> "RationalFunction":
        """Substitute x -> x**k."""
        return RationalFunction._raw(self.num.stretch(k), self.den.stretch(k))

    def __eq__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(("RationalFunction", self.num.coeffs, self.den.coeffs))

    def format(self, var: str = "q") -> str:
        if self.is_polynomial():
            return self.num.format(var)
        return f"({self.num.format(var)})/({self.den.format(var)})"

    __str__ = format

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def to_json(self) -> dict[str, list[str]]:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: Mapping[str, Sequence[str]]) -> "RationalFunction":
        return cls(Poly.from_json(data["num"]), Poly.from_json(data["den"]))


def _as_ratfun(x: Any) -> RationalFunction | None:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, LaurentPoly):
        return x.to_ratfun()
    p = _as_poly(x)
    if p is None:
        return None
    return RationalFunction._raw(p, Poly.const(1))


def ratfun_equal(a: Any, b: Any) -> bool:
    """Exact equality by cross multiplication, independent of normal forms."""
    ra, rb = _as_ratfun(a), _as_ratfun(b)
    if ra is None or rb is None:
        raise TypeError("ratfun_equal needs rational functions")
    return ra.num * rb.den == rb.num * ra.den


def substitute_z(f: RationalFunction) -> RationalFunction:
    """Evaluate ``f`` at ``z = q/(1+q)^2`` exactly, as a function of ``q``.

    Numerator and denominator are multiplied through by ``(1+q)^(2D)`` with
    ``D = max(deg num, deg den)`` so both stay polynomials.
    """
    f = _as_ratfun(f)
    if f is None:
        raise TypeError("substitute_z needs a rational function")
    top = int(max(f.num.degree, f.den.degree, 0))
    one_plus_sq = Poly((1, 2, 1))
    powers = [Poly.const(1)]
    for _ in range(top):
        powers.append(powers[-1] * one_plus_sq)

    def lift(p: Poly) -> Poly:
        acc = Poly()
        for i, c in enumerate(p):
            if c:
                acc = acc + (powers[top - i] * Poly.monomial(i, c))
        return acc

    return RationalFunction(lift(f.num), lift(f.den))


# power series -------------------------------------------------------------


class PowerSeries:
    """Power series truncated after ``x**order`` (``order + 1`` coefficients)."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable[Any], order: int | None = None):
        c = [as_fraction(x) for x in coeffs]
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        c = c[: order + 1] + [_ZERO] * (order + 1 - len(c))
        self.coeffs: tuple[Fraction, ...] = tuple(c)
        self.order = order

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return PowerSeries(self.coeffs, order)

    def _coerce(self, other) -> "PowerSeries | None":
        if isinstance(other, PowerSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return PowerSeries([other], self.order)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = min(self.order, other.order)
        return PowerSeries((a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs)), n)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries((-a for a in self.coeffs), self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PowerSeries((a * other for a in self.coeffs), self.order)
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = min(self.order, other.order)
        c = [_ZERO] * (n + 1)
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a:
                for j in range(n + 1 - i):
                    c[i + j] += a * other.coeffs[j]
        return PowerSeries(c, n)

    __rmul__ = __mul__

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """``self(inner(x))``; ``inner`` must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("inner series must vanish at the origin")
        n = min(self.order, inner.order)
        acc = PowerSeries([self.coeffs[n]], n)
        inner = inner.truncate(n)
        for c in reversed(self.coeffs[:n]):
            acc = acc * inner + c
        return acc

    def stretch(self, k: int) -> "PowerSeries":
        """Substitute x -> x**k, keeping every coefficient that is known."""
        c = [_ZERO] * (k * self.order + 1)
        for i, a in enumerate(self.coeffs):
            c[k * i] = a
        return PowerSeries(c, k * self.order)

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("PowerSeries", self.coeffs))

    def __repr__(self):
        return f"PowerSeries([{', '.join(str(c) for c in self.coeffs)}], order={self.order})"

    def format(self, var: str = "q") -> str:
        return _format_terms(enumerate(self.coeffs), var) + f" + O({var}^{self.order + 1})"

    __str__ = format


def series_expand(f: Any, order: int) -> PowerSeries:
    """Taylor coefficients of ``f`` at 0 through ``x**order``, by long division."""
    f = _as_ratfun(f)
    if f is None:
        raise TypeError("series_expand needs a rational function")
    if order < 0:
        raise ValueError("truncation order must be nonnegative")
    b = f.den.coeffs
    if b[0] == 0:
        raise PoleAtOriginError(f"{f} has a pole at the origin")
    b0 = b[0]
    out: list[Fraction] = []
    for n in range(order + 1):
        s = f.num[n]
        for j in range(1, min(n, len(b) - 1) + 1):
            if b[j]:
                s -= b[j] * out[n - j]
        out.append(s / b0)
    return PowerSeries(out, order)
