"""Exact arithmetic in K = Q(i)(q^(1/2)).

Three layers:

* ``GaussRational``: a + b*i with a, b rational (gmpy2 ``mpq``).
* ``HalfLaurent``: Laurent polynomial in x = q^(1/2) with Gaussian-rational
  coefficients, stored densely from its lowest exponent.
* ``Scalar``: a quotient of two ``HalfLaurent`` in canonical form, so that
  equality is representation equality.

``UnitMonomial`` (i^u * q^(m/2)) is the multiplicative group the quantum
parameters q_i, t_i and the signs (-1)^k live in.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

from gmpy2 import mpq


class DegenerateBase(ArithmeticError):
    pass


class GaussRational:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is type(_MPQ0) else mpq(re)
        self.im = im if type(im) is type(_MPQ0) else mpq(im)

    @classmethod
    def _raw(cls, re, im) -> "GaussRational":
        g = object.__new__(cls)
        g.re = re
        g.im = im
        return g

    def __add__(self, other: "GaussRational") -> "GaussRational":
        return GaussRational._raw(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussRational") -> "GaussRational":
        return GaussRational._raw(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussRational":
        return GaussRational._raw(-self.re, -self.im)

    def __mul__(self, other: "GaussRational") -> "GaussRational":
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussRational._raw(a * c, _MPQ0)
        return GaussRational._raw(a * c - b * d, a * d + b * c)

    def inverse(self) -> "GaussRational":
        a, b = self.re, self.im
        if not b:
            if not a:
                raise ZeroDivisionError("GaussRational division by zero")
            return GaussRational._raw(1 / a, _MPQ0)
        norm = a * a + b * b
        return GaussRational._raw(a / norm, -b / norm)

    def __truediv__(self, other: "GaussRational") -> "GaussRational":
        if not other.im:
            if not other.re:
                raise ZeroDivisionError("GaussRational division by zero")
            return GaussRational._raw(self.re / other.re, self.im / other.re)
        return self * other.inverse()

    def conjugate(self) -> "GaussRational":
        return GaussRational._raw(self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_one(self) -> bool:
        return self.re == 1 and not self.im

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.re == other and not self.im
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussRational({self})"

    def __str__(self) -> str:
        def fmt(x):
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

        if not self.im:
            return fmt(self.re)
        if not self.re:
            return f"{fmt(self.im)}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{fmt(self.re)}{sign}{fmt(abs(self.im))}*i"


_MPQ0 = mpq(0)
_MPQ1 = mpq(1)
G_ZERO = GaussRational._raw(_MPQ0, _MPQ0)
G_ONE = GaussRational._raw(_MPQ1, _MPQ0)
G_I = GaussRational._raw(_MPQ0, _MPQ1)


def _gauss(value) -> GaussRational:
    if isinstance(value, GaussRational):
        return value
    if isinstance(value, complex):
        return GaussRational(Fraction(value.real), Fraction(value.imag))
    return GaussRational(value)


# ---------------------------------------------------------------------------
# dense polynomial helpers (lists of GaussRational, index = degree)
# ---------------------------------------------------------------------------

def _trim(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def _padd(a, b) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for k, y in enumerate(b):
        out[k] = out[k] + y
    return _trim(out)


def _pmul(a, b) -> list:
    if not a or not b:
        return []
    out = [G_ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return _trim(out)


def _pscale(a, c: GaussRational) -> list:
    return [x * c for x in a]


def _pdivmod(a, b):
    """Quotient and remainder of dense polynomials over Q(i)."""
    a = list(a)
    db = len(b) - 1
    inv = b[-1].inverse()
    if len(a) - 1 < db:
        return [], a
    quot = [G_ZERO] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if not c:
            continue
        c = c * inv
        quot[k - db] = c
        for j in range(db + 1):
            if b[j]:
                a[k - db + j] = a[k - db + j] - c * b[j]
    return _trim(quot), _trim(a[:db])


def _pmonic(a) -> list:
    inv = a[-1].inverse()
    return [x * inv for x in a]


def _pgcd(a, b) -> list:
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return [G_ONE]
        _, r = _pdivmod(a, b)
        a, b = b, r
    return _pmonic(a)


def _pexactdiv(a, b) -> list:
    q, r = _pdivmod(a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


# ---------------------------------------------------------------------------
# HalfLaurent
# ---------------------------------------------------------------------------

class HalfLaurent:
    """sum_k c_k q^{(val+k)/2}; ``coeffs[0]`` and ``coeffs[-1]`` are nonzero."""

    __slots__ = ("val", "coeffs", "_hash")

    def __init__(self, coeffs: Iterable = (), val: int = 0):
        c = [_gauss(x) for x in coeffs]
        _trim(c)
        shift = 0
        while shift < len(c) and not c[shift]:
            shift += 1
        c = c[shift:]
        self.val = val + shift if c else 0
        self.coeffs = tuple(c)
        self._hash = None

    @classmethod
    def _make(cls, coeffs: list, val: int) -> "HalfLaurent":
        _trim(coeffs)
        shift = 0
        while shift < len(coeffs) and not coeffs[shift]:
            shift += 1
        obj = object.__new__(cls)
        if shift:
            coeffs = coeffs[shift:]
        obj.val = val + shift if coeffs else 0
        obj.coeffs = tuple(coeffs)
        obj._hash = None
        return obj

    @classmethod
    def from_terms(cls, terms: dict) -> "HalfLaurent":
        """Build from ``{half_exponent: coefficient}``."""
        terms = {m: _gauss(c) for m, c in terms.items() if c}
        if not terms:
            return HL_ZERO
        lo, hi = min(terms), max(terms)
        c = [G_ZERO] * (hi - lo + 1)
        for m, v in terms.items():
            c[m - lo] = v
        return cls._make(c, lo)

    @classmethod
    def monomial(cls, m: int, coeff=G_ONE) -> "HalfLaurent":
        coeff = _gauss(coeff)
        if not coeff:
            return HL_ZERO
        return cls._make([coeff], m)

    def terms(self) -> dict:
        return {self.val + k: c for k, c in enumerate(self.coeffs) if c}

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def __add__(self, other: "HalfLaurent") -> "HalfLaurent":
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        lo = min(self.val, other.val)
        a = [G_ZERO] * (self.val - lo) + list(self.coeffs)
        b = [G_ZERO] * (other.val - lo) + list(other.coeffs)
        return HalfLaurent._make(_padd(a, b), lo)

    def __neg__(self) -> "HalfLaurent":
        return HalfLaurent._make([-x for x in self.coeffs], self.val)

    def __sub__(self, other: "HalfLaurent") -> "HalfLaurent":
        return self + (-other)

    def __mul__(self, other: "HalfLaurent") -> "HalfLaurent":
        if not self.coeffs or not other.coeffs:
            return HL_ZERO
        return HalfLaurent._make(_pmul(self.coeffs, other.coeffs), self.val + other.val)

    def scale(self, c: GaussRational) -> "HalfLaurent":
        if not c:
            return HL_ZERO
        return HalfLaurent._make([x * c for x in self.coeffs], self.val)

    def shift(self, m: int) -> "HalfLaurent":
        if not self.coeffs:
            return self
        obj = object.__new__(HalfLaurent)
        obj.val = self.val + m
        obj.coeffs = self.coeffs
        obj._hash = None
        return obj

    def __eq__(self, other) -> bool:
        if not isinstance(other, HalfLaurent):
            return NotImplemented
        return self.val == other.val and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.val, self.coeffs))
        return self._hash

    def __repr__(self) -> str:
        return f"HalfLaurent({format_half_laurent(self)})"


HL_ZERO = HalfLaurent()
HL_ONE = HalfLaurent((1,))


def format_half_laurent(p: HalfLaurent) -> str:
    if p.is_zero():
        return "(0)*q^(0/2)"
    parts = [f"({c})*q^({m}/2)" for m, c in sorted(p.terms().items())]
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# Scalar
# ---------------------------------------------------------------------------

ScalarLike = Union["Scalar", "UnitMonomial", GaussRational, int, Fraction]


class Scalar:
    """Canonical quotient num/den of half-Laurent polynomials.

    Canonical form: ``den`` is a polynomial with ``den.val == 0`` and
    constant coefficient 1, and gcd(num, den) = 1 (as polynomials, after
    stripping the power of q^(1/2) from num).
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        if not isinstance(num, HalfLaurent):
            num = HalfLaurent.monomial(0, _gauss(num))
        if den is None:
            den = HL_ONE
        elif not isinstance(den, HalfLaurent):
            den = HalfLaurent.monomial(0, _gauss(den))
        n, d = _canonical(num, den)
        self.num = n
        self.den = d
        self._hash = None

    @classmethod
    def _raw(cls, num: HalfLaurent, den: HalfLaurent) -> "Scalar":
        s = object.__new__(cls)
        s.num = num
        s.den = den
        s._hash = None
        return s

    @classmethod
    def coerce(cls, x: ScalarLike) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, UnitMonomial):
            return x.to_scalar()
        if isinstance(x, HalfLaurent):
            return cls._raw(x, HL_ONE)
        return cls._raw(HalfLaurent.monomial(0, _gauss(x)), HL_ONE)

    @classmethod
    def q_power(cls, m: int, coeff=G_ONE) -> "Scalar":
        """coeff * q^(m/2)."""
        return cls._raw(HalfLaurent.monomial(m, _gauss(coeff)), HL_ONE)

    def is_zero(self) -> bool:
        return not self.num.coeffs

    def __bool__(self) -> bool:
        return bool(self.num.coeffs)

    def is_one(self) -> bool:
        return self.num == HL_ONE and self.den == HL_ONE

    def is_laurent(self) -> bool:
        return len(self.den.coeffs) == 1

    def __add__(self, other: ScalarLike) -> "Scalar":
        other = Scalar.coerce(other)
        if not other.num.coeffs:
            return self
        if not self.num.coeffs:
            return other
        if len(self.den.coeffs) == 1 and len(other.den.coeffs) == 1:
            return Scalar._raw(self.num + other.num, HL_ONE)
        if self.den == other.den:
            return Scalar(self.num + other.num, self.den)
        return Scalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._raw(-self.num, self.den)

    def __sub__(self, other: ScalarLike) -> "Scalar":
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other: ScalarLike) -> "Scalar":
        return Scalar.coerce(other) + (-self)

    def __mul__(self, other: ScalarLike) -> "Scalar":
        other = Scalar.coerce(other)
        if not self.num.coeffs or not other.num.coeffs:
            return S_ZERO
        sd1 = len(self.den.coeffs) == 1
        od1 = len(other.den.coeffs) == 1
        if sd1 and od1:
            return Scalar._raw(self.num * other.num, HL_ONE)
        # a monomial factor cannot share a polynomial factor with a denominator
        if sd1 and len(self.num.coeffs) == 1:
            return Scalar._raw(other.num.shift(self.num.val).scale(self.num.coeffs[0]), other.den)
        if od1 and len(other.num.coeffs) == 1:
            return Scalar._raw(self.num.shift(other.num.val).scale(other.num.coeffs[0]), self.den)
        return Scalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num.coeffs:
            raise ZeroDivisionError("Scalar division by zero")
        return Scalar(self.den, self.num)

    def __truediv__(self, other: ScalarLike) -> "Scalar":
        other = Scalar.coerce(other)
        if not other.num.coeffs:
            raise ZeroDivisionError("Scalar division by zero")
        if len(other.num.coeffs) == 1 and len(other.den.coeffs) == 1:
            c = other.num.coeffs[0].inverse()
            return Scalar._raw(self.num.shift(-other.num.val).scale(c), self.den)
        return self * other.inverse()

    def __rtruediv__(self, other: ScalarLike) -> "Scalar":
        return Scalar.coerce(other) / self

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inverse() ** (-k)
        out = S_ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, GaussRational, UnitMonomial)):
            return self == Scalar.coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def as_unit_monomial(self) -> "UnitMonomial | None":
        """Return the UnitMonomial equal to self, or None."""
        if len(self.den.coeffs) != 1 or len(self.num.coeffs) != 1:
            return None
        c = self.num.coeffs[0]
        for u, val in enumerate(_UNITS):
            if c == val:
                return UnitMonomial(u, self.num.val)
        return None

    def __repr__(self) -> str:
        return f"Scalar({format_scalar(self)})"

    def __str__(self) -> str:
        return format_scalar(self)


def _canonical(num: HalfLaurent, den: HalfLaurent):
    if den.is_zero():
        raise ZeroDivisionError("Scalar with zero denominator")
    if num.is_zero():
        return HL_ZERO, HL_ONE
    shift = num.val - den.val
    a = list(num.coeffs)
    b = list(den.coeffs)
    if len(b) > 1 and len(a) > 0:
        g = _pgcd(a, b)
        if len(g) > 1:
            a = _pexactdiv(a, g)
            b = _pexactdiv(b, g)
    c = b[0]
    if not c.is_one():
        inv = c.inverse()
        a = [x * inv for x in a]
        b = [x * inv for x in b]
    n = HalfLaurent._make(a, shift)
    d = HL_ONE if len(b) == 1 else HalfLaurent._make(b, 0)
    return n, d


def format_scalar(s: Scalar) -> str:
    if s.den == HL_ONE:
        return format_half_laurent(s.num)
    return f"({format_half_laurent(s.num)})/({format_half_laurent(s.den)})"


S_ZERO = Scalar._raw(HL_ZERO, HL_ONE)
S_ONE = Scalar._raw(HL_ONE, HL_ONE)


# ---------------------------------------------------------------------------
# UnitMonomial
# ---------------------------------------------------------------------------

_UNITS = (G_ONE, G_I, GaussRational._raw(mpq(-1), _MPQ0), GaussRational._raw(_MPQ0, mpq(-1)))


class UnitMonomial:
    """i^unit * q^(half/2) with unit taken mod 4."""

    __slots__ = ("unit", "half")

    def __init__(self, unit: int = 0, half: int = 0):
        self.unit = unit % 4
        self.half = half

    @classmethod
    def q(cls, half: int = 2) -> "UnitMonomial":
        return cls(0, half)

    @classmethod
    def sign(cls, k: int) -> "UnitMonomial":
        """(-1)^k."""
        return cls(2 * (k % 2), 0)

    @classmethod
    def t_power(cls, k: int) -> "UnitMonomial":
        """(t^(1/2))^k with t^(1/2) = i q^(1/2)."""
        return cls(k, k)

    def __mul__(self, other):
        if isinstance(other, UnitMonomial):
            return UnitMonomial(self.unit + other.unit, self.half + other.half)
        return self.to_scalar() * other

    def __rmul__(self, other):
        return Scalar.coerce(other) * self.to_scalar()

    def inverse(self) -> "UnitMonomial":
        return UnitMonomial(-self.unit, -self.half)

    def __truediv__(self, other: "UnitMonomial") -> "UnitMonomial":
        return self * other.inverse()

    def __pow__(self, k: int) -> "UnitMonomial":
        return UnitMonomial(self.unit * k, self.half * k)

    def __neg__(self) -> "UnitMonomial":
        return UnitMonomial(self.unit + 2, self.half)

    def to_scalar(self) -> Scalar:
        return Scalar.q_power(self.half, _UNITS[self.unit])

    def is_one(self) -> bool:
        return self.unit == 0 and self.half == 0

    def __eq__(self, other) -> bool:
        if isinstance(other, UnitMonomial):
            return self.unit == other.unit and self.half == other.half
        if isinstance(other, Scalar):
            return self.to_scalar() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.unit, self.half))

    def __repr__(self) -> str:
        unit = ("1", "i", "-1", "-i")[self.unit]
        return f"UnitMonomial({unit}*q^({self.half}/2))"


Q_HALF = UnitMonomial(0, 1)
Q = UnitMonomial(0, 2)
T_HALF = UnitMonomial(1, 1)
T = UnitMonomial(2, 2)


def unit_sum(terms) -> Scalar:
    """Sum of ``coeff * m`` over pairs (UnitMonomial m, integer coeff)."""
    acc: dict = {}
    for m, c in terms:
        g = _UNITS[m.unit]
        acc[m.half] = acc.get(m.half, G_ZERO) + GaussRational(g.re * c, g.im * c)
    return Scalar._raw(HalfLaurent.from_terms(acc), HL_ONE)
