"""q-integers and Gaussian binomials over a UnitMonomial base."""

from __future__ import annotations

from functools import lru_cache

from qasa.scalars.field import DegenerateBase, S_ONE, Scalar, UnitMonomial, unit_sum


class OutOfRange(ValueError):
    pass


def _check_base(z: UnitMonomial) -> None:
    # z - z^{-1} = 0 iff z^2 = 1
    if z.half == 0 and z.unit in (0, 2):
        raise DegenerateBase(f"z - z^-1 vanishes for z = {z!r}")


@lru_cache(maxsize=4096)
def q_int(j: int, z: UnitMonomial) -> Scalar:
    """[j]_z = (z^j - z^-j)/(z - z^-1) = z^{j-1} + z^{j-3} + ... + z^{1-j}."""
    _check_base(z)
    sign = 1
    if j < 0:
        j, sign = -j, -1
    return unit_sum((z ** (j - 1 - 2 * m), sign) for m in range(j))


@lru_cache(maxsize=4096)
def q_factorial(N: int, z: UnitMonomial) -> Scalar:
    out = S_ONE
    for j in range(1, N + 1):
        out = out * q_int(j, z)
    return out


@lru_cache(maxsize=4096)
def q_binomial(N: int, k: int, z: UnitMonomial) -> Scalar:
    if N < 0 or k < 0 or k > N:
        raise OutOfRange(f"binomial ({N} choose {k}) outside 0 <= k <= N")
    _check_base(z)
    out = q_factorial(N, z) / (q_factorial(N - k, z) * q_factorial(k, z))
    assert out.is_laurent(), "q-binomial must be a Laurent polynomial"
    return out
