"""Generator maps between the four presentations.

psi   : Chevalley super (smash)  -> Chevalley dual (smash)
phi   : Drinfeld super (smash)   -> Drinfeld dual (smash)
rho   : Chevalley dual (smash)   -> Drinfeld dual (smash)
Psi   : Chevalley super          -> Drinfeld super, built directly from the
        displayed images and again as phi^-1 . rho . psi with the sign group
        stripped at the end.

A map is determined by the images of the non-sigma symbols (including the
inverse group-likes) and of the sigma_i.  The constant c is sent to itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from qasa.cartan import Family, dual_family
from qasa.scalars.field import Scalar, unit_sum
from qasa.scalars.structure import o_sign_power
from qasa.superalg.core import Algebra, Element, Gen, MixedAlgebra, ad_chain, super_bracket


class NoSolution(ArithmeticError):
    pass


class GeneratorMap:
    """Multiplicative, linear extension of generator images."""

    def __init__(self, source: Algebra, target: Algebra, image: Callable[[Gen], Element],
                 sigma_image: Callable[[int], Element], label: str, recipe: tuple | None = None):
        self.source = source
        self.target = target
        self._image = image
        self._sigma_image = sigma_image
        self.label = label
        self.recipe = recipe
        self._cache: dict = {}
        self._sig_cache: dict = {}

    def image(self, g: Gen) -> Element:
        hit = self._cache.get(g)
        if hit is None:
            if g.kind == "c":
                hit = self.target.monomial([g])
            else:
                self.source.validate(g)
                hit = self._image(g)
                if hit.alg != self.target:
                    raise MixedAlgebra(f"{self.label}: image of {g} lives in {hit.alg.tag}")
            self._cache[g] = hit
        return hit

    def sigma_image(self, sig: int) -> Element:
        hit = self._sig_cache.get(sig)
        if hit is None:
            hit = self.target.one()
            for i in range(1, self.source.n + 1):
                if sig >> i & 1:
                    hit = hit * self._sigma_image(i)
            self._sig_cache[sig] = hit
        return hit

    def apply(self, x: Element) -> Element:
        if x.alg != self.source:
            raise MixedAlgebra(f"{self.label} expects {self.source.tag}, got {x.alg.tag}")
        total = self.target.zero()
        for (sig, word), c in x.terms.items():
            term = self.sigma_image(sig) if sig else self.target.one()
            for g in word:
                term = term * self.image(g)
                if not term:
                    break
            total = total + term.scale(c)
        return total

    __call__ = apply

    def images(self) -> dict:
        """Images of every source symbol with loop index in [-2, 2]."""
        out = {}
        for g in generators(self.source, 2):
            out[g] = self.image(g)
        return out

    def __repr__(self) -> str:
        return f"GeneratorMap({self.label}: {self.source.tag} -> {self.target.tag})"


def generators(alg: Algebra, window: int = 2) -> list:
    n = alg.n
    gens = []
    if alg.style == "chevalley":
        for i in range(n + 1):
            gens += [Gen(k, i, 0) for k in ("e", "f", "k", "k-")]
        return gens
    gens += [Gen("gh", 0, 0), Gen("gh-", 0, 0)]
    for i in range(1, n + 1):
        gens += [Gen("g", i, 0), Gen("g-", i, 0)]
        for r in range(-window, window + 1):
            if alg.datum.in_index_set(i, r):
                gens += [Gen("xi+", i, r), Gen("xi-", i, r)]
                if r:
                    gens.append(Gen("kap", i, r))
    return gens


def compose(*maps: GeneratorMap, label: str | None = None) -> GeneratorMap:
    """compose(f, g, h) = f . g . h (h acts first)."""
    first, last = maps[-1], maps[0]
    for a, b in zip(maps, maps[1:]):
        if b.target != a.source:
            raise MixedAlgebra(f"cannot compose {a.label} after {b.label}")

    def run(x: Element) -> Element:
        for m in reversed(maps):
            x = m.apply(x)
        return x

    return GeneratorMap(first.source, last.target, lambda g: run(first.source.monomial([g])),
                        lambda i: run(first.source.sigma(i)), label or ".".join(m.label for m in maps))


def transport(x: Element, alg: Algebra) -> Element:
    """Re-home an element in an algebra with the same symbols (embedding or projection).

    Projecting to a non-smash algebra requires every monomial to be sigma-free.
    """
    if not alg.smash and any(sig for (sig, _) in x.terms):
        raise ValueError(f"element still carries sign-group letters; cannot project to {alg.tag}")
    return Element(alg, dict(x.terms))


def sigma_tail_word(alg: Algebra, j: int) -> Element:
    """Phi_j = sigma_j sigma_{j+1} ... sigma_n; empty for j = n + 1."""
    if not 1 <= j <= alg.n + 1:
        raise ValueError(f"j must lie in 1..{alg.n + 1}, got {j}")
    return alg.sigma_word(range(j, alg.n + 1))


def iota_nodes(dual: Family, n: int) -> tuple[list, list]:
    """Node lists of iota_e and iota_f (sigma_j = 1 for j > n)."""
    if dual is Family.A2N2:
        return [], []
    if dual is Family.BN1:
        return list(range(2, n + 1)), list(range(1, n + 1))
    if dual is Family.DN12:
        return list(range(2, n + 1, 2)), list(range(1, n + 1, 2))
    raise ValueError(f"{dual.label} is not a dual family")


def chain_nodes(family: Family, n: int) -> list:
    """Ad nodes applied to the seed of the e_0/f_0 image, outermost first."""
    shape = family.shape
    if shape is Family.OSP1:
        return list(range(1, n + 1)) + list(range(n, 1, -1))
    if shape is Family.SL2:
        return list(range(2, n + 1)) + list(range(n, 1, -1))
    return list(range(1, n))


def _zero_images(alg: Algebra) -> tuple:
    """Images of e_0, f_0, k_0, k_0^-1 in a Drinfeld algebra (same shape for both sides)."""
    fam, n = alg.family, alg.n
    seed = n if fam.shape is Family.OSP2 else 1
    gg = alg.gamma_half(2)
    ggm = alg.gamma_half(-2)
    gam_g = alg.gamma_g_word()
    gam_g_inv = alg.gamma_g_word(inverse=True)
    nodes = chain_nodes(fam, n)
    e0 = ad_chain(False, nodes, alg.xi(-1, seed, 1)) * gg * gam_g_inv
    c = alg.monomial([Gen("c", 0, 0)])
    f0 = c * ggm * gam_g * ad_chain(True, nodes, alg.xi(1, seed, -1))
    return e0, f0, gg * gam_g_inv, ggm * gam_g


# ---------------------------------------------------------------------------
# psi
# ---------------------------------------------------------------------------

def psi_map(family: Family, n: int) -> GeneratorMap:
    dual = dual_family(family)
    src = Algebra(family, n, "chevalley", smash=True)
    tgt = Algebra(dual, n, "chevalley", smash=True)
    ie, if_ = iota_nodes(dual, n)

    def image(g: Gen) -> Element:
        i = g.node
        x = tgt.monomial([g])
        if i == 0:
            pre = {"e": ie, "f": if_, "k": ie + if_, "k-": ie + if_}[g.kind]
        else:
            pre = {"e": range(i + 1, n + 1), "f": range(i, n + 1), "k": [i], "k-": [i]}[g.kind]
        return tgt.sigma_word(pre) * x

    return GeneratorMap(src, tgt, image, tgt.sigma, "psi", ("psi", family.short, n, None))


# ---------------------------------------------------------------------------
# phi and its inverse
# ---------------------------------------------------------------------------

def _phi_like(src: Algebra, tgt: Algebra, super_family: Family, label: str, recipe) -> GeneratorMap:
    n = src.n

    def sign(i: int, r: int) -> Scalar:
        return Scalar.coerce(o_sign_power(n, super_family, i, r))

    def image(g: Gen) -> Element:
        k, i, r = g
        x = tgt.monomial([g])
        if k in ("gh", "gh-"):
            return x
        if k in ("g", "g-"):
            return tgt.sigma(i) * x
        if k == "kap":
            return x.scale(-sign(i, r))
        if k == "xi+":
            return (sigma_tail_word(tgt, i + 1) * x).scale(sign(i, r))
        # xi-: the tail starts at i so that the xi+/xi- bracket keeps its sign
        return (sigma_tail_word(tgt, i) * x).scale(sign(i, r))

    return GeneratorMap(src, tgt, image, tgt.sigma, label, recipe)


def phi_map(family: Family, n: int) -> GeneratorMap:
    dual = dual_family(family)
    src = Algebra(family, n, "drinfeld", smash=True)
    tgt = Algebra(dual, n, "drinfeld", smash=True)
    return _phi_like(src, tgt, family, "phi", ("phi", family.short, n, None))


def phi_inverse(family: Family, n: int) -> GeneratorMap:
    dual = dual_family(family)
    src = Algebra(dual, n, "drinfeld", smash=True)
    tgt = Algebra(family, n, "drinfeld", smash=True)
    return _phi_like(src, tgt, family, "phi-inv", ("phi-inv", family.short, n, None))


# ---------------------------------------------------------------------------
# rho and Psi
# ---------------------------------------------------------------------------

def _chevalley_to_drinfeld(src: Algebra, tgt: Algebra, label: str, recipe) -> GeneratorMap:
    zero = {}

    def image(g: Gen) -> Element:
        k, i, _ = g
        if i == 0:
            if not zero:
                zero.update(zip(("e", "f", "k", "k-"), _zero_images(tgt)))
            return zero[k]
        if k == "e":
            return tgt.xi(1, i, 0)
        if k == "f":
            return tgt.xi(-1, i, 0)
        return tgt.monomial([Gen("g" if k == "k" else "g-", i, 0)])

    return GeneratorMap(src, tgt, image, tgt.sigma, label, recipe)


def rho_map(dual: Family, n: int) -> GeneratorMap:
    if dual.is_super:
        raise ValueError(f"rho acts on a dual family, got {dual.label}")
    src = Algebra(dual, n, "chevalley", smash=True)
    tgt = Algebra(dual, n, "drinfeld", smash=True)
    return _chevalley_to_drinfeld(src, tgt, "rho", ("rho", dual.short, n, None))


@dataclass
class PsiPair:
    direct: GeneratorMap
    composed: GeneratorMap


def psi_direct(family: Family, n: int) -> GeneratorMap:
    src = Algebra(family, n, "chevalley")
    tgt = Algebra(family, n, "drinfeld")
    return _chevalley_to_drinfeld(src, tgt, "Psi", ("Psi", family.short, n, None))


def psi_composed(family: Family, n: int) -> GeneratorMap:
    src = Algebra(family, n, "chevalley")
    tgt = Algebra(family, n, "drinfeld")
    inner = compose(phi_inverse(family, n), rho_map(dual_family(family), n), psi_map(family, n))

    def image(g: Gen) -> Element:
        x = inner.apply(inner.source.monomial([g]))
        return transport(x, tgt)

    def no_sigma(i: int) -> Element:
        raise ValueError("the plain Chevalley algebra has no sign-group letters")

    return GeneratorMap(src, tgt, image, no_sigma, "Psi-composed", ("Psi-composed", family.short, n, None))


def psi_cap(family: Family, n: int) -> PsiPair:
    return PsiPair(psi_direct(family, n), psi_composed(family, n))


def strip_c(x: Element) -> tuple[Element, int]:
    """Remove every c letter; return the element and the (common) number removed."""
    out = {}
    counts = set()
    for (sig, w), v in x.terms.items():
        rest = tuple(g for g in w if g.kind != "c")
        counts.add(len(w) - len(rest))
        out[(sig, rest)] = out.get((sig, rest), Scalar.coerce(0)) + v
    out = {m: v for m, v in out.items() if v}
    if len(counts) > 1:
        raise ValueError("element is not homogeneous in c")
    return Element(x.alg, out), counts.pop() if counts else 0


def proportional(a: Element, b: Element) -> Scalar | None:
    """lambda with a = lambda*b, or None."""
    if a.alg != b.alg or set(a.terms) != set(b.terms):
        return None
    if not a.terms:
        return Scalar.coerce(1)
    m = next(iter(a.terms))
    lam = a.terms[m] / b.terms[m]
    if all(a.terms[k] == lam * b.terms[k] for k in a.terms):
        return lam
    return None


# ---------------------------------------------------------------------------
# c_g
# ---------------------------------------------------------------------------

@dataclass
class SolveResult:
    status: str  # "Solved" or "Inconclusive"
    value: Scalar | None
    window: int
    basis_size: int = 0
    reason: str = ""


def ef_zero_defect(family: Family, n: int) -> Element:
    """[Psi(e_0), Psi(f_0)] - (Psi(k_0) - Psi(k_0)^-1)/(q_0^zeta_0 - q_0^-zeta_0)."""
    from qasa.verify import fast_reduce

    psi = psi_direct(family, n)
    src = psi.source
    e0, f0 = psi.image(Gen("e", 0, 0)), psi.image(Gen("f", 0, 0))
    k0, k0m = psi.image(Gen("k", 0, 0)), psi.image(Gen("k-", 0, 0))
    d = src.datum
    z = d.q_node(0) ** d.zeta[0]
    diff = unit_sum(((z, 1), (z.inverse(), -1)))
    return fast_reduce(super_bracket(e0, f0) - (k0 - k0m) / diff)


def solve_c(family: Family, n: int, budget=None, window: int | None = None) -> SolveResult:
    """Find the c making the e_0/f_0 relation hold in the bounded Drinfeld ideal."""
    from qasa.presentations import drinfeld_relations
    from qasa.verify import Budget, check_zero

    budget = budget or Budget()
    W = window if window is not None else budget.window
    if budget.max_len == 0 or budget.max_basis == 0:
        return SolveResult("Inconclusive", None, W, reason="empty budget")
    defect = ef_zero_defect(family, n)
    with_c = {m: v for m, v in defect.terms.items() if any(g.kind == "c" for g in m[1])}
    lin, deg = strip_c(Element(defect.alg, with_c))
    if deg != 1:
        raise NoSolution(f"defect is not linear in c (degree {deg})")
    const = Element(defect.alg, {m: v for m, v in defect.terms.items() if m not in with_c})
    pres = drinfeld_relations(family, n, W)
    v = check_zero(const, pres, budget, extra={"c": lin})
    if v.status != "Verified":
        lone = check_zero(lin, pres, budget)
        if lone.ok and v.status == "NonzeroAtBound":
            raise NoSolution("the c-linear part lies in the ideal but the rest does not")
        return SolveResult("Inconclusive", None, W, v.basis_size, reason=v.status)
    mu = v.extra.get("coefficients", {}).get("c")
    if mu is None:
        return SolveResult("Inconclusive", None, W, v.basis_size, reason="c is not determined")
    if check_zero(lin, pres, budget).ok:
        return SolveResult("Inconclusive", None, W, v.basis_size, reason="c is not unique at this bound")
    return SolveResult("Solved", -mu, W, v.basis_size)


# ---------------------------------------------------------------------------
# lookup used by the CLI and the parallel verifier
# ---------------------------------------------------------------------------

MAP_NAMES = ("psi", "phi", "phi-inv", "rho", "Psi", "Psi-composed")


def build_map(name: str, family: Family | str, n: int) -> GeneratorMap:
    if isinstance(family, str):
        family = Family.from_short(family)
    if name == "rho":
        return rho_map(family if not family.is_super else family.partner, n)
    if not family.is_super:
        family = family.partner
    if name == "psi":
        return psi_map(family, n)
    if name == "phi":
        return phi_map(family, n)
    if name == "phi-inv":
        return phi_inverse(family, n)
    if name == "Psi":
        return psi_direct(family, n)
    if name == "Psi-composed":
        return psi_composed(family, n)
    raise ValueError(f"unknown map {name!r} (known: {', '.join(MAP_NAMES)})")


def source_target(gmap: GeneratorMap, window: int | None):
    """Relation catalogues on both sides of a map; the target window grows by theta."""
    from qasa.presentations import chevalley_relations, drinfeld_relations

    def pres(alg: Algebra, w):
        if alg.style == "chevalley":
            return chevalley_relations(alg.family, alg.n, alg.smash)
        return drinfeld_relations(alg.family, alg.n, w, alg.smash)

    W = window if window is not None else 3
    shift = 2 if gmap.source.family.shape is Family.OSP2 and gmap.source.n > 1 else 1
    src = pres(gmap.source, W)
    tgt = pres(gmap.target, W + shift)
    return src, tgt


def build_check_setup(name: str, family: str, n: int, window: int | None):
    gmap = build_map(name, family, n)
    src, tgt = source_target(gmap, window)
    return gmap, src, tgt
