from __future__ import annotations

import pytest

from helpers import random_element
from qasa.cartan import Family
from qasa.morphisms import build_check_setup
from qasa.presentations import chevalley_relations, drinfeld_relations
from qasa.superalg import Algebra, Gen
from qasa.verify import (
    Budget,
    WindowMismatch,
    check_morphism,
    check_zero,
    fast_reduce,
    fast_reduce_stepwise,
    out_of_place,
)

PRESENTATIONS = [
    (Family.OSP1, 2, "drinfeld", True),
    (Family.SL2, 2, "chevalley", True),
    (Family.OSP2, 2, "drinfeld", False),
    (Family.DN12, 2, "drinfeld", True),
    (Family.A2N2, 1, "chevalley", False),
]


def _resum(cert, pres) -> object:
    """Rebuild sum c * (h w1) rel w2 from the certificate alone."""
    alg = pres.algebra
    by_label = {r.label: r for r in pres.relations}
    total = alg.zero()
    for c, label, (sig, left), right in cert:
        rel = by_label[label]
        total = total + (alg.monomial(left, sig) * rel.element * alg.monomial(right)).scale(c)
    return fast_reduce(total)


# --- fast_reduce ------------------------------------------------------------

def test_fast_reduce_examples():
    alg = Algebra(Family.OSP1, 2, "drinfeld", smash=True)
    d = alg.datum
    x, g = alg.xi(1, 2, 1), alg.gen("g", 1)
    # gamma_1 xi+ gamma_1^-1 = q^{(a_1,a_2)} xi+, so xi+ gamma_1 = q^{-(a_1,a_2)} gamma_1 xi+
    lam = d.base_power(-d.gram[1][2]).to_scalar()
    assert fast_reduce(x * g) == (g * x).scale(lam)
    assert fast_reduce(alg.gen("g", 1) * alg.gen("g-", 1)) == alg.one()
    # sigma_i x sigma_i = chi x; the sign disappears when (a_i, a_j) is even
    assert alg.sigma(1) * x * alg.sigma(1) == x.scale((-1) ** d.gram[1][2])
    y = alg.xi(1, 1, 1)
    assert alg.sigma(1) * y * alg.sigma(1) == y
    ch = Algebra(Family.SL2, 2, "chevalley")
    assert fast_reduce(ch.gen("k", 2) * ch.gen("k-", 2)) == ch.one()


@pytest.mark.parametrize("case", PRESENTATIONS, ids=lambda s: f"{s[0].short}/{s[1]}/{s[2]}")
def test_reduction_order_independence(case, rng):
    alg = Algebra(*case)
    for _ in range(100):
        x = random_element(rng, alg, terms=3, max_len=5)
        a = fast_reduce_stepwise(x, "left")
        b = fast_reduce_stepwise(x, "right")
        assert a == b
        assert fast_reduce(x) == a
        for (_, w) in a.terms:
            assert out_of_place(w) == 0


# --- check_zero -------------------------------------------------------------

def test_check_zero_trivial_cases():
    pres = drinfeld_relations(Family.OSP1, 1, 2, smash=True)
    alg = pres.algebra
    v = check_zero(alg.zero(), pres)
    assert v.ok and v.certificate == []
    v = check_zero(alg.sigma(1) * alg.sigma(1) - alg.one(), pres)
    assert v.ok


def test_nonmember_is_reported():
    pres = drinfeld_relations(Family.OSP1, 1, 2)
    v = check_zero(pres.algebra.xi(1, 1, 0), pres)
    assert v.status == "NonzeroAtBound"
    assert v.residual is not None and v.residual.terms


def test_budget_exceeded():
    pres = drinfeld_relations(Family.OSP1, 1, 2)
    alg = pres.algebra
    long = alg.xi(1, 1, 0) ** 5
    assert check_zero(long, pres, Budget(max_len=4)).status == "BudgetExceeded"
    rel = next(r for r in pres.relations if r.name == "xx")
    word = alg.monomial([Gen("xi+", 1, 0)]) * rel.element * alg.monomial([Gen("xi-", 1, 1)])
    assert check_zero(word, pres, Budget(max_basis=1)).status == "BudgetExceeded"


def test_window_mismatch():
    pres = drinfeld_relations(Family.OSP1, 1, 2)
    other = chevalley_relations(Family.OSP1, 1)
    with pytest.raises(WindowMismatch):
        check_zero(other.algebra.gen("e", 1), pres)
    gmap, src, _ = build_check_setup("phi", "osp1", 1, 3)
    tgt = drinfeld_relations(Family.A2N2, 1, 3, smash=True)
    with pytest.raises(WindowMismatch):
        check_morphism(gmap, src, tgt)


def test_certificates_are_sound():
    """Rebuild every certificate from relation labels and compare with the candidate."""
    pres = drinfeld_relations(Family.OSP2, 2, 3)
    alg = pres.algebra
    rels = {r.name: r for r in pres.relations}
    samples = [
        alg.monomial([Gen("xi+", 1, 0)]) * rels["hx"].element * alg.monomial([Gen("xi-", 2, 1)]),
        rels["xx"].element.scale(3) + alg.gen("g", 1) * rels["xrs"].element,
        rels["serre-A"].element * alg.xi(1, 2, 0),
    ]
    for x in samples:
        v = check_zero(x, pres)
        assert v.ok, v.status
        assert _resum(v.certificate, pres) == fast_reduce(x)


def test_smash_certificate_soundness():
    gmap, src, tgt = build_check_setup("phi", "sl2", 1, 2)
    for rel in src.relations[:40]:
        image = gmap(rel.element)
        v = check_zero(image, tgt)
        assert v.ok, rel.label
        assert _resum(v.certificate, tgt) == fast_reduce(image)


def test_budget_monotonicity():
    gmap, src, tgt = build_check_setup("phi", "osp2-2", 1, 2)
    golden = [r for r in src.relations if r.name in ("hx", "xx", "xrs", "hh")][:60]
    budgets = [Budget(max_len=6, depth=0, max_basis=200), Budget(max_len=8, depth=1), Budget(), Budget(max_len=14, depth=3)]
    for rel in golden:
        image = gmap(rel.element)
        seen_ok = False
        for b in budgets:
            status = check_zero(image, tgt, b).status
            if seen_ok:
                assert status == "Verified", (rel.label, b)
            seen_ok |= status == "Verified"
        assert seen_ok


def test_check_morphism_summary_and_parallel_agree():
    gmap, src, tgt = build_check_setup("phi", "osp2-2", 2, 2)
    res1, sum1 = check_morphism(gmap, src, tgt, {"hx", "gx"}, Budget())
    res2, sum2 = check_morphism(gmap, src, tgt, {"hx", "gx"}, Budget(), jobs=2)
    assert sum1 == sum2
    assert [(r.label, r.status) for r in res1] == [(r.label, r.status) for r in res2]
    assert set(sum1) == {"hx", "gx"}
    assert all(set(v) == {"Verified"} for v in sum1.values())
