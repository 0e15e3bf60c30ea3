"""Free smash-product superalgebra over K.

A monomial is a pair ``(sig, word)``: ``sig`` is a bitmask of the sign-group
generators sigma_i (bit i for node i, 1 <= i <= n), always written in front,
and ``word`` is a tuple of non-sigma generator symbols.  Moving sigma_i past a
word x picks up (-1)^{(alpha_i, wt x)}.
"""

from __future__ import annotations

import itertools
from collections import namedtuple
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable

from qasa.cartan import CartanDatum, Family, build_datum, gamma_g_exponents
from qasa.scalars.field import S_ONE, Scalar, ScalarLike, UnitMonomial


class MixedAlgebra(TypeError):
    pass


class InhomogeneousParity(ValueError):
    pass


class UnknownGenerator(ValueError):
    pass


Gen = namedtuple("Gen", "kind node loop")

CHEVALLEY_KINDS = ("e", "f", "k", "k-")
DRINFELD_KINDS = ("xi+", "xi-", "kap", "g", "g-", "gh", "gh-")
# c stands for the central constant c_g of the e_0/f_0 images
GROUP_KINDS = frozenset({"k", "k-", "g", "g-", "gh", "gh-", "c"})
INVERSE_KIND = {"k": "k-", "k-": "k", "g": "g-", "g-": "g", "gh": "gh-", "gh-": "gh"}
_KIND_ORDER = {k: n for n, k in enumerate(("c", "gh", "gh-", "k", "k-", "g", "g-", "e", "f", "xi+", "xi-", "kap"))}


def gen_key(g: Gen) -> tuple:
    return (_KIND_ORDER[g.kind], g.node, g.loop)


@dataclass(frozen=True)
class Algebra:
    """One of the four presentations, optionally smash-extended."""

    family: Family
    n: int
    style: str  # "chevalley" or "drinfeld"
    smash: bool = False

    def __post_init__(self):
        if self.style not in ("chevalley", "drinfeld"):
            raise ValueError(f"unknown style {self.style!r}")

    @property
    def tag(self) -> str:
        return f"{self.family.short}/{self.n}/{self.style}" + ("#G" if self.smash else "")

    @cached_property
    def datum(self) -> CartanDatum:
        return build_datum(self.family, self.n)

    def with_smash(self, smash: bool = True) -> "Algebra":
        return Algebra(self.family, self.n, self.style, smash)

    # -- symbol data ------------------------------------------------------
    def validate(self, g: Gen) -> None:
        n = self.n
        kinds = CHEVALLEY_KINDS if self.style == "chevalley" else DRINFELD_KINDS
        if g.kind == "c":
            return
        if g.kind not in kinds:
            raise UnknownGenerator(f"{g.kind} is not a generator of {self.tag}")
        if g.kind in CHEVALLEY_KINDS:
            ok = 0 <= g.node <= n and g.loop == 0
        elif g.kind in ("gh", "gh-"):
            ok = g.node == 0 and g.loop == 0
        elif g.kind in ("g", "g-"):
            ok = 1 <= g.node <= n and g.loop == 0
        else:
            ok = self.datum.in_index_set(g.node, g.loop)
            if g.kind == "kap":
                ok = ok and g.loop != 0
        if not ok:
            raise UnknownGenerator(f"{format_gen(g)} is outside the alphabet of {self.tag}")

    def parity(self, g: Gen) -> int:
        k = g.kind
        if k in ("e", "f"):
            return 1 if g.node in self.datum.parity else 0
        if k in ("xi+", "xi-"):
            return 1 if (self.family.is_super and g.node == self.n) else 0
        return 0

    def weight(self, g: Gen) -> tuple:
        k = g.kind
        if k in ("e", "xi+"):
            s = 1
        elif k in ("f", "xi-"):
            s = -1
        else:
            return self._zero_weight
        w = [0] * (self.n + 1)
        w[g.node] = s
        return tuple(w)

    @cached_property
    def _zero_weight(self) -> tuple:
        return (0,) * (self.n + 1)

    def pairing(self, g: Gen) -> tuple:
        """Weight lambda with g x g^-1 = base^{(lambda, wt x)} x for group-like g."""
        k = g.kind
        if k in ("k", "g"):
            s = 1
        elif k in ("k-", "g-"):
            s = -1
        else:
            return self._zero_weight
        w = [0] * (self.n + 1)
        w[g.node] = s
        return tuple(w)

    def form(self, a: tuple, b: tuple) -> int:
        gram = self.datum.gram
        return sum(a[i] * gram[i][j] * b[j] for i in range(len(a)) if a[i] for j in range(len(b)) if b[j])

    def flip_mask(self, g: Gen) -> int:
        """Bitmask of nodes i >= 1 with (alpha_i, wt g) odd."""
        cache = self._mask_cache
        m = cache.get(g)
        if m is None:
            w = self.weight(g)
            m = 0
            for i in range(1, self.n + 1):
                if self.form(_unit(self.n, i), w) % 2:
                    m |= 1 << i
            cache[g] = m
        return m

    @cached_property
    def _mask_cache(self) -> dict:
        return {}

    def word_mask(self, word: tuple) -> int:
        m = 0
        for g in word:
            m ^= self.flip_mask(g)
        return m

    def word_parity(self, word: tuple) -> int:
        return sum(self.parity(g) for g in word) % 2

    def word_weight(self, word: tuple) -> tuple:
        w = [0] * (self.n + 1)
        for g in word:
            for i, x in enumerate(self.weight(g)):
                w[i] += x
        return tuple(w)

    # -- element constructors ----------------------------------------------
    def one(self) -> "Element":
        return Element(self, {(0, ()): S_ONE})

    def zero(self) -> "Element":
        return Element(self, {})

    def scalar(self, c: ScalarLike) -> "Element":
        c = Scalar.coerce(c)
        return Element(self, {(0, ()): c} if c else {})

    def gen(self, kind: str, node: int = 0, loop: int = 0) -> "Element":
        if kind == "sigma":
            return self.sigma(node)
        g = Gen(kind, node, loop)
        self.validate(g)
        return Element(self, {(0, (g,)): S_ONE})

    def sigma(self, i: int) -> "Element":
        if not self.smash:
            raise UnknownGenerator(f"sigma[{i}] needs a smash-extended algebra, got {self.tag}")
        if not 1 <= i <= self.n:
            raise UnknownGenerator(f"sigma[{i}] outside 1..{self.n}")
        return Element(self, {(1 << i, ()): S_ONE})

    def sigma_word(self, nodes: Iterable[int]) -> "Element":
        sig = 0
        for i in nodes:
            if i <= self.n:
                sig ^= 1 << i
        if sig and not self.smash:
            raise UnknownGenerator(f"sigma word needs a smash-extended algebra, got {self.tag}")
        return Element(self, {(sig, ()): S_ONE})

    def monomial(self, word: Iterable[Gen], sig: int = 0, coeff: ScalarLike = S_ONE) -> "Element":
        return Element(self, {(sig, tuple(word)): Scalar.coerce(coeff)})

    # Drinfeld conveniences
    def xi(self, sign: int, i: int, r: int) -> "Element":
        return self.gen("xi+" if sign > 0 else "xi-", i, r)

    def kap(self, i: int, r: int) -> "Element":
        return self.gen("kap", i, r)

    def gamma_half(self, k: int) -> "Element":
        """gamma^{k/2} as a word of gh or gh- symbols."""
        kind = "gh" if k >= 0 else "gh-"
        return self.monomial([Gen(kind, 0, 0)] * abs(k))

    def group_power(self, kind: str, i: int, k: int) -> "Element":
        """k_i^k or gamma_i^k as a word; kind is 'k' or 'g'."""
        sym = kind if k >= 0 else INVERSE_KIND[kind]
        return self.monomial([Gen(sym, i, 0)] * abs(k))

    def gamma_g_word(self, inverse: bool = False) -> "Element":
        word = []
        for i, e in enumerate(gamma_g_exponents(self.family, self.n), start=1):
            word += [Gen("g-" if inverse else "g", i, 0)] * e
        return self.monomial(word)


def _unit(n: int, i: int) -> tuple:
    w = [0] * (n + 1)
    w[i] = 1
    return tuple(w)


def _popcount(x: int) -> int:
    return bin(x).count("1")


class Element:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: Algebra, terms: dict):
        self.alg = alg
        self.terms = terms

    # -- helpers ------------------------------------------------------------
    def _check(self, other: "Element") -> None:
        if other.alg != self.alg:
            raise MixedAlgebra(f"cannot combine {self.alg.tag} with {other.alg.tag}")

    def _lift(self, other) -> "Element":
        if isinstance(other, Element):
            self._check(other)
            return other
        return self.alg.scalar(other)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def copy(self) -> "Element":
        return Element(self.alg, dict(self.terms))

    # -- linear structure ---------------------------------------------------
    def __add__(self, other) -> "Element":
        other = self._lift(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for m, c in small.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Element(self.alg, out)

    __radd__ = __add__

    def __neg__(self) -> "Element":
        return Element(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Element":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Element":
        return self._lift(other) - self

    def scale(self, c: ScalarLike) -> "Element":
        c = Scalar.coerce(c)
        if not c:
            return self.alg.zero()
        if c.is_one():
            return self
        return Element(self.alg, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other) -> "Element":
        if isinstance(other, Element):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "Element":
        return self.scale(other)

    def __truediv__(self, other) -> "Element":
        return self.scale(Scalar.coerce(1) / Scalar.coerce(other))

    def __pow__(self, k: int) -> "Element":
        out = self.alg.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Element):
            return self.alg == other.alg and self.terms == other.terms
        if isinstance(other, (int, Scalar)):
            return self == self.alg.scalar(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.alg, frozenset(self.terms.items())))

    # -- grading --------------------------------------------------------------
    def parity(self) -> int:
        """Parity of a homogeneous element (0 for zero)."""
        ps = {self.alg.word_parity(w) for (_, w) in self.terms}
        if len(ps) > 1:
            raise InhomogeneousParity("element mixes even and odd monomials")
        return ps.pop() if ps else 0

    def weight(self) -> tuple | None:
        ws = {self.alg.word_weight(w) for (_, w) in self.terms}
        if len(ws) > 1:
            return None
        return ws.pop() if ws else self.alg._zero_weight

    def max_length(self) -> int:
        return max((len(w) for (_, w) in self.terms), default=0)

    def coefficient(self, word: Iterable[Gen], sig: int = 0) -> Scalar:
        return self.terms.get((sig, tuple(word)), Scalar.coerce(0))

    def __repr__(self) -> str:
        from qasa.superalg.text import format_element

        return f"Element[{self.alg.tag}]({format_element(self)})"

    def __str__(self) -> str:
        from qasa.superalg.text import format_element

        return format_element(self)


def multiply(a: Element, b: Element) -> Element:
    if a.alg != b.alg:
        raise MixedAlgebra(f"cannot multiply {a.alg.tag} by {b.alg.tag}")
    alg = a.alg
    out: dict = {}
    smash = alg.smash
    b_items = list(b.terms.items())
    for (s1, w1), c1 in a.terms.items():
        mask = alg.word_mask(w1) if smash else 0
        for (s2, w2), c2 in b_items:
            c = c1 * c2
            # w1 s2 = chi(s2, w1) s2 w1
            if s2 & mask and _popcount(s2 & mask) % 2:
                c = -c
            key = (s1 ^ s2, w1 + w2)
            v = out.get(key)
            if v is None:
                out[key] = c
            else:
                v = v + c
                if v:
                    out[key] = v
                else:
                    del out[key]
    return Element(alg, out)


def super_bracket(x: Element, y: Element, a: ScalarLike = S_ONE) -> Element:
    """[x, y]_a = xy - (-1)^{[x][y]} a yx."""
    px, py = x.parity(), y.parity()
    a = Scalar.coerce(a)
    if px and py:
        a = -a
    return x * y - (y * x).scale(a)


def conjugate(alg: Algebra, g: Gen, x: Element) -> Element:
    """g x g^-1, simplified monomial by monomial with the conjugation rule."""
    out = {}
    for (sig, w), c in x.terms.items():
        lam = conj_factor(alg, g, alg.word_weight(w))
        out[(sig, w)] = c * lam.to_scalar() if not lam.is_one() else c
    return Element(alg, out)


def _ad(alg: Algebra, raising: bool, i: int, x: Element) -> Element:
    if alg.style == "chevalley":
        head = alg.gen("e" if raising else "f", i)
        g = Gen("k" if raising else "k-", i, 0)
    else:
        head = alg.gen("xi+" if raising else "xi-", i, 0)
        g = Gen("g" if raising else "g-", i, 0)
    term = conjugate(alg, g, x) * head
    if head.parity() and x.parity():
        return head * x + term
    return head * x - term


def ad_e(i: int, x: Element) -> Element:
    """Ad_{e_i}(x) = e_i x - (-1)^{[e_i][x]} k_i x k_i^-1 e_i (gamma_i and xi+_{i,0} in Drinfeld form)."""
    return _ad(x.alg, True, i, x)


def ad_f(i: int, x: Element) -> Element:
    """Ad_{f_i}(x) = f_i x - (-1)^{[f_i][x]} k_i^-1 x k_i f_i."""
    return _ad(x.alg, False, i, x)


def ad_chain(raising: bool, nodes: Iterable[int], x: Element) -> Element:
    """Ad_{nodes[0]} ... Ad_{nodes[-1]}(x); the last node acts first."""
    for i in reversed(list(nodes)):
        x = _ad(x.alg, raising, i, x)
    return x


def sym_over(names: list, values: list, template: Callable[..., Element]) -> Element:
    """Sum of ``template(**assignment)`` over all permutations of ``values``."""
    if len(names) != len(values):
        raise ValueError("sym_over: one value per index name")
    total = None
    for perm in itertools.permutations(values):
        term = template(**dict(zip(names, perm)))
        total = term if total is None else total + term
    return total


def conj_factor(alg: Algebra, g: Gen, weight: tuple) -> UnitMonomial:
    """Factor lambda with g x g^-1 = lambda x for x of the given weight."""
    e = alg.form(alg.pairing(g), weight)
    return alg.datum.base_power(e)


def format_gen(g: Gen) -> str:
    k = g.kind
    if k in ("e", "f", "k", "k-", "g", "g-"):
        return f"{k}[{g.node}]"
    if k in ("xi+", "xi-", "kap"):
        return f"{k}[{g.node},{g.loop}]"
    if k == "gh":
        return "g^(1/2)"
    if k == "gh-":
        return "g^(-1/2)"
    if k == "c":
        return "c_g"
    raise UnknownGenerator(k)
