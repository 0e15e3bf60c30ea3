from __future__ import annotations

from math import factorial

import pytest

from qasa.cartan import Family
from qasa.presentations import (
    OrderExceeded,
    WindowTooSmall,
    chevalley_relations,
    drinfeld_relations,
    kappa_hat,
    rescale_to_standard,
)
from qasa.scalars.field import S_ONE, Scalar, unit_sum
from qasa.scalars.qcomb import q_int
from qasa.scalars.structure import u_coeff
from qasa.superalg import Algebra, Gen, super_bracket
from qasa.verify import fast_reduce

ORDER = 5


# --- kappa-hat oracle ---------------------------------------------------------

def _series_mul(a: dict, b: dict, order: int) -> dict:
    """Product of truncated series {(degree, multiset of loops): Scalar}."""
    out: dict = {}
    for (da, ma), ca in a.items():
        for (db, mb), cb in b.items():
            if da + db > order:
                continue
            key = (da + db, tuple(sorted(ma + mb)))
            out[key] = out.get(key, Scalar(0)) + ca * cb
    return {k: v for k, v in out.items() if not v.is_zero()}


def kappa_hat_oracle(alg: Algebra, sign: int, i: int, order: int) -> dict:
    """Coefficients of gamma_i^{+-1} exp(+-(z - z^-1) sum kappa_{i,+-r} u^{-+r}) by brute force."""
    z = alg.datum.base()
    c = unit_sum(((z, 1), (z.inverse(), -1)))
    if sign < 0:
        c = -c
    x = {(r, (sign * r,)): c for r in range(1, order + 1) if alg.datum.in_index_set(i, r)}
    total = {(0, ()): S_ONE}
    power = {(0, ()): S_ONE}
    for k in range(1, order + 1):
        power = _series_mul(power, x, order)
        for key, v in power.items():
            total[key] = total.get(key, Scalar(0)) + v / factorial(k)
    return total


def _as_series(x, sign: int) -> dict:
    out = {}
    for (sig, word), c in x.terms.items():
        assert sig == 0
        assert word[0] == Gen("g" if sign > 0 else "g-", word[0].node, 0)
        loops = tuple(sorted(g.loop for g in word[1:]))
        assert all(g.kind == "kap" for g in word[1:])
        out[loops] = out.get(loops, Scalar(0)) + c
    return out


@pytest.mark.parametrize("family", [Family.OSP1, Family.SL2, Family.OSP2, Family.A2N2, Family.BN1, Family.DN12],
                         ids=lambda f: f.short)
@pytest.mark.parametrize("n", (1, 2))
def test_kappa_hat_matches_series_oracle(family, n):
    alg = Algebra(family, n, "drinfeld")
    for sign in (1, -1):
        for i in range(1, n + 1):
            oracle = kappa_hat_oracle(alg, sign, i, ORDER)
            for m in range(ORDER + 1):
                got = _as_series(kappa_hat(alg, sign, i, sign * m), sign)
                want = {k[1]: v for k, v in oracle.items() if k[0] == m}
                assert got == want, (family, n, sign, i, m)


def test_kappa_hat_examples():
    alg = Algebra(Family.OSP1, 2, "drinfeld")
    assert kappa_hat(alg, 1, 1, 0) == alg.gen("g", 1)
    assert kappa_hat(alg, -1, 1, 0) == alg.gen("g-", 1)
    assert kappa_hat(alg, 1, 1, -1) == alg.zero()
    c = unit_sum(((alg.datum.base(), 1), (alg.datum.base().inverse(), -1)))
    g = alg.gen("g", 1)
    want = g * (alg.kap(1, 2).scale(c) + (alg.kap(1, 1) * alg.kap(1, 1)).scale(c * c / 2))
    assert kappa_hat(alg, 1, 1, 2) == want
    with pytest.raises(OrderExceeded):
        kappa_hat(alg, 1, 1, 6, order=5)


def test_generating_function_identity():
    """kappa-hat^+(u) * exp(-(q - q^-1) sum kappa u^-r) = gamma_i to order 5."""
    alg = Algebra(Family.SL2, 2, "drinfeld")
    for i in (1, 2):
        inv = kappa_hat_oracle(alg, 1, i, ORDER)
        inv = {k: v * (-1) ** len(k[1]) for k, v in inv.items()}  # exp(-X)
        for m in range(ORDER + 1):
            total = alg.zero()
            for a in range(m + 1):
                left = kappa_hat(alg, 1, i, a)
                right = alg.zero()
                for (deg, loops), c in inv.items():
                    if deg == m - a:
                        right = right + alg.monomial([Gen("kap", i, r) for r in loops], coeff=c)
                total = total + left * right
            # commute kappa letters into sorted order: they only differ by ordering
            canon = alg.zero()
            for (sig, word), c in total.terms.items():
                canon = canon + alg.monomial([word[0]] + sorted(word[1:], key=lambda g: g.loop), sig, c)
            assert canon == (alg.gen("g", i) if m == 0 else alg.zero()), (i, m)


# --- catalogues ---------------------------------------------------------------

@pytest.mark.parametrize("family", list(Family), ids=lambda f: f.short)
@pytest.mark.parametrize("n", (1, 2))
def test_relations_are_homogeneous(family, n):
    for pres in (chevalley_relations(family, n), chevalley_relations(family, n, smash=True),
                 drinfeld_relations(family, n, 2), drinfeld_relations(family, n, 2, smash=True)):
        alg = pres.algebra
        for rel in pres.relations:
            x = rel.element
            assert x.parity() in (0, 1)  # raises on inhomogeneous parity
            assert x.weight() is not None, rel.label
            for (sig, word) in x.terms:
                for g in word:
                    if g.kind != "c":
                        alg.validate(g)
                    if pres.window is not None and g.kind in ("xi+", "xi-", "kap"):
                        assert abs(g.loop) <= pres.window


@pytest.mark.parametrize("family", [Family.OSP1, Family.OSP2, Family.BN1], ids=lambda f: f.short)
def test_catalogue_is_window_monotone(family):
    small = {r.label for r in drinfeld_relations(family, 2, 2).relations}
    big = {r.label for r in drinfeld_relations(family, 2, 3).relations}
    assert small <= big and len(big) > len(small)


def test_window_too_small():
    with pytest.raises(WindowTooSmall):
        drinfeld_relations(Family.OSP1, 1, 1)


def test_xrs_exclusion_for_osp1():
    pres = drinfeld_relations(Family.OSP1, 2, 2)
    pairs = {(r.param("i"), r.param("j")) for r in pres.select(["xrs"])}
    assert (2, 2) not in pairs and (1, 1) in pairs
    pres = drinfeld_relations(Family.SL2, 2, 2)
    assert (2, 2) in {(r.param("i"), r.param("j")) for r in pres.select(["xrs"])}


def test_ef_relation_shape():
    pres = chevalley_relations(Family.OSP1, 2)
    alg = pres.algebra
    d = alg.datum
    rel = next(r for r in pres.relations if r.name == "ef" and r.param("i") == r.param("j") == 2)
    e, f = alg.gen("e", 2), alg.gen("f", 2)
    z = d.q_node(2) ** d.zeta[2]
    want = super_bracket(e, f) - (alg.gen("k", 2) - alg.gen("k-", 2)).scale(
        S_ONE / unit_sum(((z, 1), (z.inverse(), -1))))
    assert rel.element == want
    off = next(r for r in pres.relations if r.name == "ef" and r.param("i") == 1 and r.param("j") == 2)
    assert off.element == super_bracket(alg.gen("e", 1), alg.gen("f", 2))


def test_serre_nesting_depth():
    pres = chevalley_relations(Family.OSP1, 2)
    d = pres.datum
    for rel in pres.select(["serre-e"]):
        i, j = rel.param("i"), rel.param("j")
        assert rel.element.max_length() == 1 - d.cartan[i][j] + 1


def test_hh_and_hx_instances():
    pres = drinfeld_relations(Family.SL2, 2, 3)
    alg = pres.algebra
    hh = next(r for r in pres.select(["hh"]) if r.param("r") == 1 and r.param("s") == 2)
    assert hh.element == super_bracket(alg.kap(hh.param("i"), 1), alg.kap(hh.param("j"), 2))
    hx = next(r for r in pres.select(["hx"])
              if (r.param("i"), r.param("j"), r.param("pm"), r.param("r"), r.param("s")) == (1, 2, 1, 1, 0))
    u = u_coeff(Family.SL2, 2, 1, 2, 1)
    z = alg.datum.base()
    coeff = u / unit_sum(((z, 1), (z.inverse(), -1)))
    want = super_bracket(alg.kap(1, 1), alg.xi(1, 2, 0)) - (alg.gamma_half(-1) * alg.xi(1, 2, 1)).scale(coeff)
    assert fast_reduce(hx.element) == fast_reduce(want)


def test_xx_at_zero_loops():
    pres = drinfeld_relations(Family.OSP2, 2, 2)
    alg = pres.algebra
    rel = next(r for r in pres.select(["xx"]) if (r.param("i"), r.param("j"), r.param("r"), r.param("s")) == (2, 2, 0, 0))
    z = alg.datum.base()
    want = super_bracket(alg.xi(1, 2, 0), alg.xi(-1, 2, 0)) - (alg.gen("g", 2) - alg.gen("g-", 2)).scale(
        S_ONE / unit_sum(((z, 1), (z.inverse(), -1))))
    assert fast_reduce(rel.element) == fast_reduce(want)


def test_rescale_to_standard():
    pres = chevalley_relations(Family.OSP1, 2)
    m = rescale_to_standard(pres)
    alg = pres.algebra
    assert m(alg.gen("e", 1)) == alg.gen("e", 1)  # [1]_{q_1} = 1
    d = alg.datum
    assert m(alg.gen("e", 2)) == alg.gen("e", 2).scale(q_int(2, d.q_node(2)))
    dr = drinfeld_relations(Family.OSP1, 2, 2)
    m = rescale_to_standard(dr)
    assert m(dr.algebra.gen("g", 1)) == dr.algebra.gen("g", 1)
