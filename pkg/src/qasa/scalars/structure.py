"""Structure constants u_{i,j,r}, u'_{i,j,r} and the signs o(i)^{c r}."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from qasa.cartan import Family, build_datum, in_index_set
from qasa.scalars.field import G_ONE, GaussRational, S_ZERO, Scalar, UnitMonomial, unit_sum


class UndefinedPower(ArithmeticError):
    pass


def _power_diff(base: UnitMonomial, e: Fraction) -> Scalar:
    """base^e - base^-e for a rational exponent e with base^e a unit monomial."""
    if e == 0:
        return S_ZERO
    u, h = base.unit * e, base.half * e
    if u.denominator != 1 or h.denominator != 1:
        raise UndefinedPower(f"{base!r}^{e} is not a unit monomial")
    m = UnitMonomial(int(u), int(h))
    return unit_sum(((m, 1), (m.inverse(), -1)))


def _check_nodes(n: int, i: int, j: int) -> None:
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"nodes must lie in 1..{n}, got ({i}, {j})")


@lru_cache(maxsize=None)
def u_coeff(family: Family, n: int, i: int, j: int, r: int) -> Scalar:
    if not family.is_super:
        raise ValueError(f"u_coeff expects a super family, got {family.label}")
    _check_nodes(n, i, j)
    d = build_datum(family, n)
    qi = d.q_node(i)
    a = d.cartan[i][j]
    sgn = -1 if r % 2 else 1
    if i == j == n:
        qn = d.q_node(n)
        if family is Family.OSP1:
            return _power_diff(qn, Fraction(4 * r)) - _power_diff(qn, Fraction(2 * r))
        return _power_diff(qn, Fraction(2 * r)) * sgn
    if family is Family.OSP2:
        if r % 2:
            return S_ZERO
        return _power_diff(qi, Fraction(r * a, 2)) * 2
    return _power_diff(qi, Fraction(r * a))


@lru_cache(maxsize=None)
def u_prime_coeff(family: Family, n: int, i: int, j: int, r: int) -> Scalar:
    if family.is_super:
        raise ValueError(f"u_prime_coeff expects a dual family, got {family.label}")
    _check_nodes(n, i, j)
    d = build_datum(family, n)
    ti = d.q_node(i)
    a = d.cartan[i][j]
    if i == j == n and family is Family.A2N2:
        tn = d.q_node(n)
        t2r = tn ** (2 * r)
        second = unit_sum(((t2r, 1), (t2r.inverse(), 1), (UnitMonomial(), -1 if r % 2 == 0 else 1)))
        return _power_diff(tn, Fraction(2 * r)) * second
    if i == j == n and family is Family.DN12:
        return _power_diff(d.q_node(n), Fraction(2 * r))
    if family is Family.DN12:
        if r % 2:
            return S_ZERO
        return _power_diff(ti, Fraction(r * a, 2)) * 2
    return _power_diff(ti, Fraction(r * a))


def c_value(family: Family) -> Fraction:
    return Fraction(1, 2) if family.shape is Family.OSP2 else Fraction(1)


def o_sign_exponent(n: int, family: Family, i: int, r: int) -> int:
    """Integer e with o(i)^{c r} = (-1)^e."""
    e = (n - i) * c_value(family) * r
    if e.denominator != 1:
        if not in_index_set(family, n, i, r):
            raise UndefinedPower(f"o({i})^({c_value(family)}*{r}) is undefined off the index set")
        raise AssertionError("half-integral sign exponent on the index set")
    return int(e) % 2


def o_sign_power(n: int, family: Family, i: int, r: int) -> GaussRational:
    return -G_ONE if o_sign_exponent(n, family, i, r) else G_ONE
