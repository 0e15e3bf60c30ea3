"""Root data for the three super families and their dual affine algebras.

Each family is realised by explicit simple roots in Z^n with the standard
form, normalised so that (alpha_n, alpha_n) = 1. The null root is dropped:
it pairs to zero with everything, so the Gram matrix is unaffected.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from qasa.scalars.field import UnitMonomial


class UnsupportedRank(ValueError):
    pass


class AlreadyDual(ValueError):
    pass


class Family(enum.Enum):
    OSP1 = ("osp1", "osp(1|2n)^(1)", True)
    SL2 = ("sl2", "sl(1|2n)^(2)", True)
    OSP2 = ("osp2-2", "osp(2|2n)^(2)", True)
    A2N2 = ("a2n2", "A_{2n}^(2)", False)
    BN1 = ("bn1", "B_n^(1)", False)
    DN12 = ("dn12", "D_{n+1}^(2)", False)

    def __init__(self, short: str, label: str, is_super: bool):
        self.short = short
        self.label = label
        self.is_super = is_super

    @classmethod
    def from_short(cls, name: str) -> "Family":
        for fam in cls:
            if fam.short == name or fam.name.lower() == name.lower():
                return fam
        known = ", ".join(f.short for f in cls)
        raise ValueError(f"unknown family {name!r} (known: {known})")

    @property
    def partner(self) -> "Family":
        return _PAIRS[self]

    @property
    def shape(self) -> "Family":
        """The super family sharing this family's Cartan matrix."""
        return self if self.is_super else _PAIRS[self]


_PAIRS = {
    Family.OSP1: Family.A2N2,
    Family.SL2: Family.BN1,
    Family.OSP2: Family.DN12,
    Family.A2N2: Family.OSP1,
    Family.BN1: Family.SL2,
    Family.DN12: Family.OSP2,
}

SUPER_FAMILIES = (Family.OSP1, Family.SL2, Family.OSP2)
DUAL_FAMILIES = (Family.A2N2, Family.BN1, Family.DN12)


def dual_family(family: Family) -> Family:
    if not family.is_super:
        raise AlreadyDual(f"{family.label} is already a non-super family")
    return family.partner


def _simple_roots(shape: Family, n: int) -> list[tuple[int, ...]]:
    def eps(k):
        v = [0] * n
        v[k - 1] = 1
        return v

    roots = []
    for i in range(1, n):
        roots.append(tuple(a - b for a, b in zip(eps(i), eps(i + 1))))
    roots.append(tuple(eps(n)))
    if shape is Family.OSP1:
        a0 = tuple(-2 * x for x in eps(1))
    elif shape is Family.SL2 and n >= 2:
        a0 = tuple(-a - b for a, b in zip(eps(1), eps(2)))
    else:
        a0 = tuple(-x for x in eps(1))
    return [a0] + roots


@dataclass(frozen=True)
class CartanDatum:
    family: Family
    n: int
    gram: tuple[tuple[int, ...], ...]
    cartan: tuple[tuple[int, ...], ...]
    parity: frozenset
    zeta: tuple[int, ...]

    @property
    def is_super(self) -> bool:
        return self.family.is_super

    @property
    def nodes(self) -> range:
        return range(self.n + 1)

    def form(self, i: int, j: int) -> int:
        return self.gram[i][j]

    def q_node(self, i: int) -> UnitMonomial:
        """q_i = q^{(a_i,a_i)/2} on super families, t_i = t^{(a_i,a_i)/2} on dual ones."""
        half = self.gram[i][i]
        if self.family.is_super:
            return UnitMonomial(0, half)
        return UnitMonomial.t_power(half)

    def base(self) -> UnitMonomial:
        """q for super families, t = -q for dual ones."""
        return UnitMonomial(0, 2) if self.family.is_super else UnitMonomial(2, 2)

    def base_power(self, k: int) -> UnitMonomial:
        b = self.base()
        return UnitMonomial(b.unit * k, b.half * k)

    def is_odd(self, i: int) -> bool:
        return i in self.parity

    def theta(self, i: int, j: int) -> int:
        return theta(self.family, self.n, i, j)

    def in_index_set(self, i: int, r: int) -> bool:
        return in_index_set(self.family, self.n, i, r)

    def gamma_exponents(self) -> tuple[int, ...]:
        return gamma_g_exponents(self.family, self.n)

    def to_json(self) -> dict:
        return {
            "family": self.family.short,
            "label": self.family.label,
            "rank": self.n,
            "gram": [list(row) for row in self.gram],
            "cartan": [list(row) for row in self.cartan],
            "parity": sorted(self.parity),
            "zeta": list(self.zeta),
        }


@lru_cache(maxsize=None)
def build_datum(family: Family, n: int) -> CartanDatum:
    if n < 1:
        raise UnsupportedRank(f"rank must be >= 1, got {n}")
    shape = family.shape
    roots = _simple_roots(shape, n)
    gram = tuple(tuple(sum(a * b for a, b in zip(x, y)) for y in roots) for x in roots)
    cartan = []
    for i in range(n + 1):
        row = []
        for j in range(n + 1):
            a = Fraction(2 * gram[i][j], gram[i][i])
            if a.denominator != 1:
                raise AssertionError(f"non-integral Cartan entry a_{i}{j} = {a}")
            row.append(int(a))
        cartan.append(tuple(row))
    if not family.is_super:
        parity = frozenset()
    elif shape is Family.OSP2:
        parity = frozenset({0, n})
    elif shape is Family.SL2 and n == 1:
        # the branch diagram needs n >= 2; at n = 1 node 0 is the odd partner of node 1
        parity = frozenset({0, 1})
    else:
        parity = frozenset({n})
    # q_i^{zeta_i} is an integral power of q on every node
    zeta = tuple(2 if gram[i][i] == 1 else 1 for i in range(n + 1))
    return CartanDatum(family, n, gram, tuple(cartan), parity, zeta)


def theta(family: Family, n: int, i: int, j: int) -> int:
    if family.shape is Family.OSP2 and (i, j) != (n, n):
        return 2
    return 1


def in_index_set(family: Family, n: int, i: int, r: int) -> bool:
    if not 1 <= i <= n:
        return False
    if family.shape is Family.OSP2 and i < n and r % 2:
        return False
    return True


def gamma_g_exponents(family: Family, n: int) -> tuple[int, ...]:
    shape = family.shape
    if shape is Family.OSP1:
        return (2,) * n
    if shape is Family.SL2:
        return (1,) + (2,) * (n - 1)
    return (1,) * n


def bond(datum: CartanDatum, i: int, j: int) -> tuple[int, str]:
    """Bond multiplicity a_ij*a_ji and arrow direction between two nodes.

    The arrow points from the longer root to the shorter one: '>' when
    node i is longer, '<' when node j is longer, '' for equal lengths.
    """
    mult = datum.cartan[i][j] * datum.cartan[j][i]
    li, lj = datum.gram[i][i], datum.gram[j][j]
    arrow = ">" if li > lj else "<" if li < lj else ""
    return mult, arrow if mult else ""
