"""Random samplers and independent oracles shared by the tests."""
from __future__ import annotations

import random
from fractions import Fraction

from qasa.cartan import Family
from qasa.scalars.field import GaussRational, HalfLaurent, Scalar
from qasa.superalg import Algebra, Element
from qasa.morphisms import generators


def random_laurent(rnd: random.Random, terms: int = 3, span: int = 4) -> HalfLaurent:
    acc = {}
    for _ in range(rnd.randint(1, terms)):
        acc[rnd.randint(-span, span)] = GaussRational(rnd.randint(-3, 3), rnd.randint(-2, 2))
    return HalfLaurent.from_terms(acc)


def random_scalar(rnd: random.Random, nonzero: bool = False) -> Scalar:
    while True:
        num, den = random_laurent(rnd), random_laurent(rnd, terms=2, span=3)
        if den.is_zero():
            continue
        s = Scalar(num, den)
        if nonzero and s.is_zero():
            continue
        return s


def random_monomial(rnd: random.Random, alg: Algebra, max_len: int = 4) -> Element:
    """A product of random generators, with sigmas sprinkled in when the algebra has them."""
    gens = generators(alg, 2)
    x = alg.one()
    for _ in range(rnd.randint(0, max_len)):
        if alg.smash and rnd.random() < 0.3:
            x = x * alg.sigma(rnd.randint(1, alg.n))
        else:
            x = x * alg.monomial([rnd.choice(gens)])
    return x


def random_element(rnd: random.Random, alg: Algebra, terms: int = 4, max_len: int = 4) -> Element:
    x = alg.zero()
    for _ in range(rnd.randint(1, terms)):
        c = Scalar.q_power(rnd.randint(-3, 3), GaussRational(rnd.randint(-3, 3) or 1, 0))
        x = x + random_monomial(rnd, alg, max_len).scale(c)
    return x


def random_homogeneous(rnd: random.Random, alg: Algebra, max_len: int = 4) -> Element:
    return random_monomial(rnd, alg, max_len).scale(Scalar.q_power(rnd.randint(-2, 2)))


ALGEBRAS = [
    Algebra(f, n, style, smash)
    for f in (Family.OSP1, Family.SL2, Family.OSP2, Family.A2N2)
    for n in (1, 2)
    for style in ("chevalley", "drinfeld")
    for smash in (False, True)
]


# ---------------------------------------------------------------------------
# exact evaluation at a point, used as an oracle independent of the gcd code
# ---------------------------------------------------------------------------

class CF:
    """Gaussian rational a + b i with Fraction parts."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a, self.b = Fraction(a), Fraction(b)

    def __add__(self, o):
        o = _cf(o)
        return CF(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, o):
        o = _cf(o)
        return CF(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        return _cf(o) - self

    def __neg__(self):
        return CF(-self.a, -self.b)

    def __mul__(self, o):
        o = _cf(o)
        return CF(self.a * o.a - self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def inv(self):
        n = self.a * self.a + self.b * self.b
        return CF(self.a / n, -self.b / n)

    def __truediv__(self, o):
        return self * _cf(o).inv()

    def __pow__(self, k: int):
        out, base = CF(1), self if k >= 0 else self.inv()
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, o):
        o = _cf(o)
        return self.a == o.a and self.b == o.b

    def __repr__(self):
        return f"CF({self.a}, {self.b})"


def _cf(x):
    return x if isinstance(x, CF) else CF(x)


I_CF = CF(0, 1)


def eval_gauss(g) -> CF:
    return CF(Fraction(int(g.re.numerator), int(g.re.denominator)),
              Fraction(int(g.im.numerator), int(g.im.denominator)))


def eval_laurent(p: HalfLaurent, x: CF) -> CF:
    out = CF(0)
    for m, c in p.terms().items():
        out = out + eval_gauss(c) * x ** m
    return out


def eval_scalar(s: Scalar, x: CF) -> CF:
    """Value of s at q^(1/2) = x."""
    return eval_laurent(s.num, x) / eval_laurent(s.den, x)
