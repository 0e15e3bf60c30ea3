"""Instantiated relation catalogues for the four presentations.

Chevalley catalogues have finitely many relations.  Drinfeld catalogues are
infinite; we instantiate every relation whose loop indices all lie in the
window [-W, W] and in the index set of the family.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import factorial

from qasa.cartan import Family
from qasa.scalars.field import S_ONE, Scalar, UnitMonomial, unit_sum
from qasa.scalars.qcomb import q_binomial
from qasa.scalars.structure import u_coeff, u_prime_coeff
from qasa.superalg.core import Algebra, Element, Gen, ad_e, ad_f, super_bracket, sym_over


class WindowTooSmall(ValueError):
    pass


class OrderExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    name: str
    params: tuple  # sorted (key, value) pairs
    element: Element

    @property
    def label(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.name}({inner})"

    def param(self, key: str):
        return dict(self.params).get(key)


def _rel(name: str, element: Element, **params) -> Relation:
    return Relation(name, tuple(sorted(params.items())), element)


@dataclass
class Presentation:
    algebra: Algebra
    window: int | None
    relations: list = field(default_factory=list)

    @property
    def style(self) -> str:
        return self.algebra.style

    @property
    def datum(self):
        return self.algebra.datum

    def names(self) -> list:
        return sorted({r.name for r in self.relations})

    def select(self, names=None) -> list:
        if names is None:
            return list(self.relations)
        names = set(names)
        return [r for r in self.relations if r.name in names]


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _qdiff(z: UnitMonomial) -> Scalar:
    """z - z^-1."""
    return unit_sum(((z, 1), (z.inverse(), -1)))


def _base_diff(alg: Algebra) -> Scalar:
    """q - q^-1 on the super side, t - t^-1 on the dual side."""
    return _qdiff(alg.datum.base())


# ---------------------------------------------------------------------------
# Chevalley
# ---------------------------------------------------------------------------

def chevalley_relations(family: Family, n: int, smash: bool = False) -> Presentation:
    alg = Algebra(family, n, "chevalley", smash)
    d = alg.datum
    rels = []
    nodes = list(d.nodes)
    one = alg.one()
    for i in nodes:
        k, km = alg.gen("k", i), alg.gen("k-", i)
        rels.append(_rel("kinv", k * km - one, i=i, side=0))
        rels.append(_rel("kinv", km * k - one, i=i, side=1))
    for i, j in itertools.combinations(nodes, 2):
        rels.append(_rel("kk", alg.gen("k", i) * alg.gen("k", j) - alg.gen("k", j) * alg.gen("k", i), i=i, j=j))
    for i in nodes:
        qi = d.q_node(i)
        k, km = alg.gen("k", i), alg.gen("k-", i)
        for j in nodes:
            a = d.cartan[i][j]
            e, f = alg.gen("e", j), alg.gen("f", j)
            rels.append(_rel("ke", k * e * km - e.scale(qi ** a), i=i, j=j))
            rels.append(_rel("kf", k * f * km - f.scale(qi ** (-a)), i=i, j=j))
    for i in nodes:
        qz = d.q_node(i) ** d.zeta[i]
        cartan_part = (alg.gen("k", i) - alg.gen("k-", i)).scale(_qdiff(qz).inverse())
        for j in nodes:
            x = super_bracket(alg.gen("e", i), alg.gen("f", j))
            if i == j:
                x = x - cartan_part
            rels.append(_rel("ef", x, i=i, j=j))
    for i in nodes:
        for j in nodes:
            if i == j:
                continue
            ell = 1 - d.cartan[i][j]
            xe, xf = alg.gen("e", j), alg.gen("f", j)
            for _ in range(ell):
                xe, xf = ad_e(i, xe), ad_f(i, xf)
            rels.append(_rel("serre-e", xe, i=i, j=j))
            rels.append(_rel("serre-f", xf, i=i, j=j))
    if smash:
        rels.extend(_sigma_relations(alg, [alg.gen(kd, j) for j in nodes for kd in ("e", "f", "k", "k-")]))
    return Presentation(alg, None, rels)


def _sigma_relations(alg: Algebra, gens: list) -> list:
    """sigma_i^2 = 1 and sigma_i x sigma_i = (-1)^{(alpha_i, wt x)} x.

    Multiplication already normalises sign-group letters, so these reduce to
    zero identically; they are listed for completeness of the catalogue.
    """
    rels = []
    for i in range(1, alg.n + 1):
        s = alg.sigma(i)
        rels.append(_rel("sigma-sq", s * s - alg.one(), i=i))
        for x in gens:
            (_, word), = x.terms
            sign = -1 if alg.flip_mask(word[0]) >> i & 1 else 1
            rels.append(_rel("sigma-act", s * x * s - x.scale(sign), i=i, gen=str(x)))
    return rels


# ---------------------------------------------------------------------------
# kappa hat
# ---------------------------------------------------------------------------

def _partitions(m: int, parts: list):
    """Multiplicity vectors {r: k_r} over allowed parts with sum r*k_r = m."""
    if m == 0:
        yield {}
        return
    if not parts:
        return
    r, rest = parts[0], parts[1:]
    for k in range(m // r + 1):
        for tail in _partitions(m - k * r, rest):
            out = dict(tail)
            if k:
                out[r] = k
            yield out


def kappa_hat(alg: Algebra, sign: int, i: int, m: int, order: int | None = None) -> Element:
    """kappa-hat^{sign}_{i,m} expanded from its exponential generating series."""
    if order is not None and abs(m) > order:
        raise OrderExceeded(f"|m| = {abs(m)} exceeds order {order}")
    if sign > 0 and m < 0 or sign < 0 and m > 0:
        return alg.zero()
    mm = abs(m)
    c = _base_diff(alg)
    if sign < 0:
        c = -c
    allowed = [r for r in range(1, mm + 1) if alg.datum.in_index_set(i, r)]
    total = alg.zero()
    prefix = Gen("g" if sign > 0 else "g-", i, 0)
    for mult in _partitions(mm, sorted(allowed, reverse=True)):
        coeff = S_ONE
        word = [prefix]
        for r in sorted(mult):
            k = mult[r]
            coeff = coeff * (c ** k) / factorial(k)
            word += [Gen("kap", i, sign * r)] * k
        total = total + alg.monomial(word, coeff=coeff)
    return total


# ---------------------------------------------------------------------------
# Drinfeld
# ---------------------------------------------------------------------------

def drinfeld_relations(family: Family, n: int, window: int, smash: bool = False) -> Presentation:
    if window < 2:
        raise WindowTooSmall(f"window must be >= 2, got {window}")
    alg = Algebra(family, n, "drinfeld", smash)
    d = alg.datum
    W = window
    is_super = family.is_super
    nodes = range(1, n + 1)
    loops = range(-W, W + 1)

    def ok(i, r):
        return -W <= r <= W and d.in_index_set(i, r)

    def xi(s, i, r):
        return alg.xi(s, i, r)

    rels = []
    one = alg.one()
    diff = _base_diff(alg)
    u = u_coeff if is_super else u_prime_coeff

    # (1) group-like part
    gh, ghm = alg.gamma_half(1), alg.gamma_half(-1)
    rels.append(_rel("gh-inv", gh * ghm - one, side=0))
    rels.append(_rel("gh-inv", ghm * gh - one, side=1))
    gens = []
    for i in nodes:
        gens += [alg.gen("g", i), alg.gen("g-", i)]
        for r in loops:
            if ok(i, r):
                gens += [xi(1, i, r), xi(-1, i, r)]
                if r:
                    gens.append(alg.kap(i, r))
    for x in gens:
        for h, tag in ((gh, "+"), (ghm, "-")):
            rels.append(_rel("gh-central", h * x - x * h, gen=str(x), half=tag))
    for i in nodes:
        g, gm = alg.gen("g", i), alg.gen("g-", i)
        rels.append(_rel("g-inv", g * gm - one, i=i, side=0))
        rels.append(_rel("g-inv", gm * g - one, i=i, side=1))
    for i, j in itertools.combinations(nodes, 2):
        rels.append(_rel("gg", alg.gen("g", i) * alg.gen("g", j) - alg.gen("g", j) * alg.gen("g", i), i=i, j=j))
    for i in nodes:
        qi = d.q_node(i)
        g, gm = alg.gen("g", i), alg.gen("g-", i)
        for j in nodes:
            a = d.cartan[i][j]
            for r in loops:
                if not ok(j, r):
                    continue
                for s in (1, -1):
                    x = xi(s, j, r)
                    rels.append(_rel("gx", g * x * gm - x.scale(qi ** (s * a)), i=i, j=j, r=r, pm=s))
                if r:
                    # gamma_i commutes with the Cartan loop generators (weight zero)
                    k = alg.kap(j, r)
                    rels.append(_rel("g-kap", g * k * gm - k, i=i, j=j, r=r))

    # hx: kappa against xi
    for i in nodes:
        for j in nodes:
            for r in loops:
                if r == 0 or not ok(i, r):
                    continue
                uu = u(family, n, i, j, r)
                for s in loops:
                    if not ok(j, s):
                        continue
                    if uu and not ok(j, s + r):
                        continue
                    for pm in (1, -1):
                        lhs = super_bracket(alg.kap(i, r), xi(pm, j, s))
                        if uu:
                            # xi- picks up the opposite sign, as the Jacobi identity with xx requires
                            coeff = uu / (diff * r) * pm
                            lhs = lhs - (alg.gamma_half(-pm * abs(r)) * xi(pm, j, s + r)).scale(coeff)
                        rels.append(_rel("hx", lhs, i=i, j=j, r=r, s=s, pm=pm))

    # hh: kappa against kappa
    for i in nodes:
        for j in nodes:
            for r in loops:
                for s in loops:
                    if r == 0 or s == 0 or not ok(i, r) or not ok(j, s):
                        continue
                    x = super_bracket(alg.kap(i, r), alg.kap(j, s))
                    if r + s == 0:
                        uu = u(family, n, i, j, r)
                        if uu:
                            coeff = uu / (diff * diff * r)
                            x = x - (alg.gamma_half(2 * r) - alg.gamma_half(-2 * r)).scale(coeff)
                    rels.append(_rel("hh", x, i=i, j=j, r=r, s=s))

    # xx: xi+ against xi-; on the dual side the bracket is read as [xi'+, xi'-]
    for i in nodes:
        for j in nodes:
            for r in loops:
                for s in loops:
                    if not ok(i, r) or not ok(j, s) or abs(r + s) > W:
                        continue
                    x = super_bracket(xi(1, i, r), xi(-1, j, s))
                    if i == j:
                        m = r + s
                        rhs = alg.gamma_half(r - s) * kappa_hat(alg, 1, i, m) - alg.gamma_half(s - r) * kappa_hat(alg, -1, i, m)
                        x = x - rhs.scale(diff.inverse())
                    rels.append(_rel("xx", x, i=i, j=j, r=r, s=s))

    # xrs: xi against xi of the same sign
    excluded = (Family.OSP1, Family.A2N2)
    for i in nodes:
        for j in nodes:
            if family in excluded and i == j == n:
                continue
            th = d.theta(i, j)
            aij = d.q_node(i) ** d.cartan[i][j]
            aji = d.q_node(j) ** d.cartan[j][i]
            for r in loops:
                for s in loops:
                    if (i, r) > (j, s):
                        continue
                    for pm in (1, -1):
                        idx = [(i, r + pm * th), (j, s), (j, s + pm * th), (i, r)]
                        if not all(ok(a, b) for a, b in idx):
                            continue
                        x = super_bracket(xi(pm, i, r + pm * th), xi(pm, j, s), aij) + super_bracket(
                            xi(pm, j, s + pm * th), xi(pm, i, r), aji
                        )
                        rels.append(_rel("xrs", x, i=i, j=j, r=r, s=s, pm=pm))

    rels.extend(_drinfeld_serre(alg, W, ok))
    if smash:
        rels.extend(_sigma_relations(alg, gens))
    return Presentation(alg, W, rels)


def _serre_sum(alg, pm, i, rs, j, s, base, alternating):
    """sym_{r_1..r_l} sum_k (+-1)^k [l k]_base xi_{i,r_1}..xi_{i,r_k} xi_{j,s} xi_{i,r_{k+1}}..xi_{i,r_l}."""
    ell = len(rs)
    names = [f"r{a}" for a in range(ell)]

    def template(**assign):
        vals = [assign[nm] for nm in names]
        total = alg.zero()
        for k in range(ell + 1):
            c = q_binomial(ell, k, base)
            if alternating and k % 2:
                c = -c
            word = [Gen("xi+" if pm > 0 else "xi-", i, v) for v in vals[:k]]
            word.append(Gen("xi+" if pm > 0 else "xi-", j, s))
            word += [Gen("xi+" if pm > 0 else "xi-", i, v) for v in vals[k:]]
            total = total + alg.monomial(word, coeff=c)
        return total

    return sym_over(names, list(rs), template)


def _drinfeld_serre(alg: Algebra, W: int, ok) -> list:
    d = alg.datum
    n = alg.n
    fam = alg.family
    rels = []
    nodes = range(1, n + 1)
    loops = [r for r in range(-W, W + 1)]

    def xi(s, i, r):
        return alg.xi(s, i, r)

    def commutation(i, j):
        for r in loops:
            for s in loops:
                if ok(i, r) and ok(j, s):
                    for pm in (1, -1):
                        yield r, s, pm, super_bracket(xi(pm, i, r), xi(pm, j, s))

    is_super = fam.is_super
    qn = d.q_node(n)
    # (A): i < n (plus i = n, j = n-1 for B_n^(1))
    for i in nodes:
        for j in nodes:
            if i == j:
                continue
            if i == n:
                if not (fam is Family.BN1 and j == n - 1):
                    continue
            ell = 1 - d.cartan[i][j]
            base = d.q_node(i)
            for rs in itertools.combinations_with_replacement([r for r in loops if ok(i, r)], ell):
                for s in loops:
                    if not ok(j, s):
                        continue
                    for pm in (1, -1):
                        x = _serre_sum(alg, pm, i, rs, j, s, base, True)
                        rels.append(_rel("serre-A", x, i=i, j=j, rs=rs, s=s, pm=pm))
    # i = n against a non-adjacent node: plain commutation
    for j in range(1, n - 1):
        for r, s, pm, x in commutation(n, j):
            rels.append(_rel("serre-B" if is_super else "serre-A", x, i=n, j=j, rs=(r,), s=s, pm=pm))
    # (B) for sl(1|2n)^(2): j = n-1, l = 3, base sqrt(-1) q_n
    if fam is Family.SL2 and n >= 2:
        j = n - 1
        base = UnitMonomial(1, 0) * qn
        for rs in itertools.combinations_with_replacement([r for r in loops if ok(n, r)], 3):
            for s in loops:
                if not ok(j, s):
                    continue
                for pm in (1, -1):
                    x = _serre_sum(alg, pm, n, rs, j, s, base, False)
                    rels.append(_rel("serre-B", x, i=n, j=j, rs=rs, s=s, pm=pm))
    # (C) osp(1|2n)^(1) and its mirror (B) for A_{2n}^(2)
    if fam in (Family.OSP1, Family.A2N2):
        rels.extend(_serre_osp1(alg, W, ok, "serre-C" if is_super else "serre-B"))
    # (D) osp(2|2n)^(2) and its mirror (C) for D_{n+1}^(2)
    if fam in (Family.OSP2, Family.DN12) and n >= 2:
        name = "serre-D" if is_super else "serre-C"
        qn2 = qn ** 2
        for k in loops:
            if not ok(n - 1, k):
                continue
            for r, s in itertools.combinations_with_replacement(loops, 2):
                for pm in (1, -1):
                    if not all(ok(n, v) for v in (r + pm, s + pm, r, s)):
                        continue

                    def tpl(r, s, pm=pm, k=k):
                        inner = super_bracket(xi(pm, n - 1, k), xi(pm, n, r + pm), qn2)
                        return super_bracket(inner, xi(pm, n, s))

                    rels.append(_rel(name, sym_over(["r", "s"], [r, s], tpl), k=k, r=r, s=s, pm=pm))
    return rels


def _serre_osp1(alg: Algebra, W: int, ok, name: str) -> list:
    n = alg.n
    qn = alg.datum.q_node(n)
    loops = range(-W, W + 1)
    rels = []

    def xi(s, r, i=n):
        return alg.xi(s, i, r)

    for pm in (1, -1):
        for rs in itertools.combinations_with_replacement(loops, 3):
            if not all(ok(n, v) and ok(n, v + pm) for v in rs):
                continue

            def t1(r1, r2, r3, pm=pm):
                return super_bracket(super_bracket(xi(pm, r1 + pm), xi(pm, r2), qn ** 2), xi(pm, r3), qn ** 4)

            rels.append(_rel(name + "1", sym_over(["r1", "r2", "r3"], list(rs), t1), rs=rs, pm=pm))
        for r, s in itertools.combinations_with_replacement(loops, 2):
            if not all(ok(n, v) for v in (r + 2 * pm, s + 2 * pm, r + pm, s + pm, r, s)):
                continue

            def t2(r, s, pm=pm):
                a = super_bracket(xi(pm, r + 2 * pm), xi(pm, s), qn ** 2)
                b = super_bracket(xi(pm, r + pm), xi(pm, s + pm), qn ** (-6))
                return a - b.scale(qn ** 4)

            rels.append(_rel(name + "2", sym_over(["r", "s"], [r, s], t2), r=r, s=s, pm=pm))
        if n >= 2:
            for k in loops:
                if not ok(n - 1, k):
                    continue
                for r, s in itertools.combinations_with_replacement(loops, 2):
                    if not all(ok(n, v) for v in (r + pm, s + pm, r, s)):
                        continue

                    def t3(r, s, pm=pm, k=k):
                        a = super_bracket(super_bracket(xi(pm, r + pm), xi(pm, s), qn ** 2), xi(pm, k, n - 1), qn ** 4)
                        b = super_bracket(super_bracket(xi(pm, k, n - 1), xi(pm, r + pm), qn ** 2), xi(pm, s))
                        return a.scale(qn ** 2) + b.scale(unit_sum(((qn ** 2, 1), (qn ** -2, 1))))

                    rels.append(_rel(name + "3", sym_over(["r", "s"], [r, s], t3), k=k, r=r, s=s, pm=pm))
    return rels


# ---------------------------------------------------------------------------
# rescaling automorphisms
# ---------------------------------------------------------------------------

def rescale_to_standard(presentation: Presentation):
    """Diagonal automorphism bringing the relations to their textbook form.

    Chevalley: e_i -> [zeta_i]_{q_i} e_i.  Drinfeld: kappa_{i,s} and
    xi+_{i,s} scale by (q - q^-1)/(q_i - q_i^-1).  Everything else is fixed.
    """
    from qasa.morphisms import GeneratorMap
    from qasa.scalars.qcomb import q_int

    alg = presentation.algebra
    d = alg.datum

    if alg.style == "chevalley":

        def image(g: Gen) -> Element:
            x = alg.monomial([g])
            if g.kind == "e":
                return x.scale(q_int(d.zeta[g.node], d.q_node(g.node)))
            return x

    else:
        diff = _base_diff(alg)

        def image(g: Gen) -> Element:
            x = alg.monomial([g])
            if g.kind in ("kap", "xi+"):
                return x.scale(diff / _qdiff(d.q_node(g.node)))
            return x

    return GeneratorMap(alg, alg, image, lambda i: alg.sigma(i), "rescale")
