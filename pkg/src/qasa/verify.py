"""Bounded-degree ideal membership.

``fast_reduce`` applies the structural rules exactly: sign-group letters are
already in front after multiplication, group-like letters (k, gamma_i,
gamma^(1/2), the constant c) are moved to the front with their conjugation
factor and collected into a canonical prefix.

``check_zero`` decides whether an element is a combination of two-sided
multiples h*w1*rel*w2 of catalogue relations.  Candidate rows are produced by
matching subwords of the element's monomials against relation terms, then a
sparse elimination over the coefficient field decides membership.  Every
Verified answer carries a certificate that is re-multiplied and compared with
the input before it is returned.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import gmpy2

from qasa.scalars.field import S_ONE, Scalar, UnitMonomial
from qasa.superalg.core import GROUP_KINDS, INVERSE_KIND, Algebra, Element, Gen, gen_key


class WindowMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Budget:
    max_len: int = 12  # L: letters outside the group-like part
    window: int = 3  # W
    max_steps: int = 100_000  # S: rewrite steps per monomial in the stepwise reducer
    max_basis: int = 20_000  # B: rows in one membership system
    depth: int = 2  # closure rounds after the first matching pass

    def __post_init__(self):
        for name in ("max_len", "window", "max_steps", "max_basis"):
            if getattr(self, name) < 0:
                raise ValueError(f"budget field {name} must be non-negative")

    def to_json(self) -> dict:
        return {"max_len": self.max_len, "window": self.window, "max_steps": self.max_steps,
                "max_basis": self.max_basis, "depth": self.depth}


@dataclass
class Verdict:
    status: str  # "Verified", "NonzeroAtBound" or "BudgetExceeded"
    certificate: list = field(default_factory=list)  # (coeff, relation label, left, right)
    residual: Element | None = None
    basis_size: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == "Verified"


# ---------------------------------------------------------------------------
# fast_reduce
# ---------------------------------------------------------------------------

_GROUP_BASE = {"k": ("k", 1), "k-": ("k", -1), "g": ("g", 1), "g-": ("g", -1), "gh": ("gh", 1), "gh-": ("gh", -1), "c": ("c", 1)}


def _prefix(exps: dict) -> tuple:
    """Canonical word for a group exponent vector {(base, node): e}."""
    word = []
    for (base, node), e in exps.items():
        if not e:
            continue
        kind = base if e > 0 else INVERSE_KIND[base]
        word += [Gen(kind, node, 0)] * abs(e)
    word.sort(key=gen_key)
    return tuple(word)


def _exps(word) -> dict:
    out: dict = {}
    for g in word:
        base, s = _GROUP_BASE[g.kind]
        key = (base, g.node)
        out[key] = out.get(key, 0) + s
    return out


def split_word(word: tuple) -> tuple:
    """(group prefix, rest) of a reduced word."""
    k = 0
    while k < len(word) and word[k].kind in GROUP_KINDS:
        k += 1
    return word[:k], word[k:]


def _reduce_word(alg: Algebra, word: tuple):
    cache = alg.__dict__.setdefault("_fast_reduce_cache", {})
    hit = cache.get(word)
    if hit is not None:
        return hit
    exps: dict = {}
    rest = []
    before = [0] * (alg.n + 1)
    e_total = 0
    for g in word:
        kind = g.kind
        if kind in GROUP_KINDS:
            base, s = _GROUP_BASE[kind]
            key = (base, g.node)
            exps[key] = exps.get(key, 0) + s
            if kind not in ("gh", "gh-", "c") and any(before):
                # x g = base^{-(pair g, wt x)} g x
                e_total -= alg.form(alg.pairing(g), tuple(before))
        else:
            rest.append(g)
            for i, v in enumerate(alg.weight(g)):
                before[i] += v
    out = (_prefix(exps) + tuple(rest), alg.datum.base_power(e_total))
    cache[word] = out
    return out


def fast_reduce(x: Element, presentation=None, budget: Budget | None = None) -> Element:
    alg = x.alg
    out: dict = {}
    for (sig, word), c in x.terms.items():
        new, fac = _reduce_word(alg, word)
        if not fac.is_one():
            c = c * fac.to_scalar()
        key = (sig, new)
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


def out_of_place(word: tuple) -> int:
    """Number of (non-group, group-like) pairs in the wrong order."""
    seen = 0
    count = 0
    for g in word:
        if g.kind in GROUP_KINDS:
            count += seen
        else:
            seen += 1
    return count


def fast_reduce_stepwise(x: Element, schedule: str = "left", max_steps: int = 100_000) -> Element:
    """Reference reducer using adjacent swaps only.

    ``schedule`` picks the leftmost ("left") or rightmost ("right") misplaced
    pair at each step; the measure ``out_of_place`` must drop by one per swap.
    """
    alg = x.alg
    out = alg.zero()
    for (sig, word), c in x.terms.items():
        w = list(word)
        fac = UnitMonomial()
        measure = out_of_place(word)
        steps = 0
        while True:
            spots = [p for p in range(len(w) - 1) if w[p].kind not in GROUP_KINDS and w[p + 1].kind in GROUP_KINDS]
            if not spots:
                break
            p = spots[0] if schedule == "left" else spots[-1]
            xg, g = w[p], w[p + 1]
            e = alg.form(alg.pairing(g), alg.weight(xg))
            fac = fac * alg.datum.base_power(-e)
            w[p], w[p + 1] = g, xg
            new_measure = out_of_place(tuple(w))
            assert new_measure == measure - 1, "rewrite step did not decrease the measure"
            measure = new_measure
            steps += 1
            if steps > max_steps:
                raise RuntimeError("rewrite step budget exhausted")
        grp, rest = split_word(tuple(w))
        word2 = _prefix(_exps(grp)) + rest
        out = out + alg.monomial(word2, sig, c * fac.to_scalar())
    return out


# ---------------------------------------------------------------------------
# relation index
# ---------------------------------------------------------------------------

class RelationIndex:
    """Reduced relations of a presentation keyed by their anchor subwords."""

    def __init__(self, presentation):
        self.presentation = presentation
        self.alg = presentation.algebra
        self.rels = []
        self.index: dict = {}
        for rel in presentation.relations:
            red = fast_reduce(rel.element)
            if not red.terms:
                continue
            k = len(self.rels)
            self.rels.append((rel, red))
            lens = [len(split_word(w)[1]) for (_, w) in red.terms]
            cut = min(2, max(lens))
            for (sig, w) in red.terms:
                grp, rest = split_word(w)
                if len(rest) >= cut and rest:
                    self.index.setdefault(rest, []).append((k, sig, grp))


_INDEX_CACHE: dict = {}


def relation_index(presentation) -> RelationIndex:
    key = id(presentation)
    hit = _INDEX_CACHE.get(key)
    if hit is None or hit.presentation is not presentation:
        hit = RelationIndex(presentation)
        _INDEX_CACHE[key] = hit
    return hit


def _mkey(m):
    sig, word = m
    return (len(word), tuple(gen_key(g) for g in word), sig)


def _row_element(alg: Algebra, red: Element, sig: int, grp: tuple, left: tuple, right: tuple) -> Element:
    h = alg.monomial(grp + left, sig)
    return fast_reduce(h * red * alg.monomial(right))


# ---------------------------------------------------------------------------
# linear algebra
# ---------------------------------------------------------------------------

def _find_prime() -> tuple[int, int]:
    p = gmpy2.next_prime(1 << 62)
    while p % 4 != 1:
        p = gmpy2.next_prime(p)
    p = int(p)
    g = 2
    while pow(g, (p - 1) // 2, p) != p - 1:
        g += 1
    return p, pow(g, (p - 1) // 4, p)


_P, _I = _find_prime()
_S = 1234567891011  # evaluation point for q^(1/2); fixed so runs are reproducible


class _Evaluator:
    """K -> F_p, q^(1/2) -> _S, i -> a square root of -1."""

    def __init__(self):
        self.cache: dict = {}
        self.inv_s = pow(_S, _P - 2, _P)

    def _hl(self, h) -> int:
        acc = 0
        for k, c in enumerate(h.coeffs):
            re = c.re.numerator * pow(c.re.denominator, _P - 2, _P)
            im = c.im.numerator * pow(c.im.denominator, _P - 2, _P)
            acc = (acc + (re + im * _I) * pow(_S, k, _P)) % _P
        e = h.val
        return acc * (pow(_S, e, _P) if e >= 0 else pow(self.inv_s, -e, _P)) % _P

    def __call__(self, c: Scalar) -> int:
        v = self.cache.get(c)
        if v is None:
            den = self._hl(c.den)
            if den == 0:
                raise ZeroDivisionError("evaluation point hits a pole")
            v = self._hl(c.num) * pow(den, _P - 2, _P) % _P
            self.cache[c] = v
        return v


class _ModSolver:
    """Echelon form over F_p with leading-monomial pivots; tracks combinations."""

    def __init__(self):
        self.pivots: dict = {}

    def _reduce(self, row: dict, combo: dict, keep_residual: bool):
        residual = {}
        while row:
            lead = max(row, key=_mkey)
            c = row[lead]
            piv = self.pivots.get(lead)
            if piv is None:
                if not keep_residual:
                    return lead
                residual[lead] = c
                del row[lead]
                continue
            prow, pcombo = piv
            for m, v in prow.items():
                nv = (row.get(m, 0) - c * v) % _P
                if nv:
                    row[m] = nv
                else:
                    row.pop(m, None)
            for k, v in pcombo.items():
                nv = (combo.get(k, 0) + c * v) % _P
                if nv:
                    combo[k] = nv
                else:
                    combo.pop(k, None)
        return residual if keep_residual else None

    def add(self, key, row: dict) -> None:
        row = dict(row)
        used: dict = {}
        lead = self._reduce(row, used, keep_residual=False)
        if lead is None:
            return
        inv = pow(row[lead], _P - 2, _P)
        norm = {m: v * inv % _P for m, v in row.items()}
        # current row = row_key - sum(used_k * pivot_k)
        comb = {key: inv}
        for k, v in used.items():
            nv = (comb.get(k, 0) - v * inv) % _P
            if nv:
                comb[k] = nv
            else:
                comb.pop(k, None)
        self.pivots[lead] = (norm, comb)

    def express(self, target: dict):
        combo: dict = {}
        residual = self._reduce(dict(target), combo, keep_residual=True)
        return residual, combo


def _solve_exact(target: dict, rows: dict):
    """Exact coefficients lambda_k with target = sum lambda_k rows[k], or None.

    Intended for the handful of rows singled out by the modular pass.
    """
    keys = list(rows)
    pivots: dict = {}
    for key in keys:
        row = dict(rows[key])
        comb = {key: S_ONE}
        while row:
            lead = max(row, key=_mkey)
            piv = pivots.get(lead)
            if piv is None:
                break
            c = row[lead]
            _axpy(row, c, piv[0])
            _axpy(comb, c, piv[1])
        if not row:
            continue
        inv = S_ONE / row[lead]
        pivots[lead] = ({m: v * inv for m, v in row.items()}, {k: v * inv for k, v in comb.items()})
    row = dict(target)
    lam: dict = {}
    while row:
        lead = max(row, key=_mkey)
        piv = pivots.get(lead)
        if piv is None:
            return None
        c = row[lead]
        _axpy(row, c, piv[0])
        for k, v in piv[1].items():
            nv = lam.get(k)
            nv = c * v if nv is None else nv + c * v
            if nv:
                lam[k] = nv
            else:
                lam.pop(k, None)
    return lam


def _axpy(row: dict, c: Scalar, other: dict) -> None:
    """row -= c * other, in place."""
    for m, v in other.items():
        nv = row.get(m)
        nv = -(c * v) if nv is None else nv - c * v
        if nv:
            row[m] = nv
        else:
            row.pop(m, None)


def check_zero(x: Element, presentation, budget: Budget | None = None, extra: dict | None = None) -> Verdict:
    """Decide x in span{h w1 rel w2} (plus optional named ``extra`` rows)."""
    budget = budget or Budget()
    alg = presentation.algebra
    if x.alg != alg:
        raise WindowMismatch(f"element lives in {x.alg.tag}, catalogue is for {alg.tag}")
    cand = fast_reduce(x)
    if not cand.terms:
        return Verdict("Verified")
    idx = relation_index(presentation)
    for (_, w) in cand.terms:
        if len(split_word(w)[1]) > budget.max_len:
            return Verdict("BudgetExceeded", residual=cand, extra={"reason": "candidate longer than max_len"})

    rows: dict = {}
    ev = _Evaluator()
    solver = _ModSolver()

    def push(key, el):
        rows[key] = el
        solver.add(key, {m: ev(c) for m, c in el.terms.items()})

    for key, el in (extra or {}).items():
        push(("extra", key), fast_reduce(el))
    target = {m: ev(c) for m, c in cand.terms.items()}

    seen = set()
    frontier = list(cand.terms)
    for key in list(rows):
        frontier.extend(rows[key].terms)
    rounds = 0
    while frontier and rounds <= budget.depth:
        new_monos = []
        for m in frontier:
            if m in seen:
                continue
            seen.add(m)
            sig_c, word_c = m
            grp_c, rest_c = split_word(word_c)
            exps_c = _exps(grp_c)
            L = len(rest_c)
            for a in range(L):
                for b in range(a + 1, L + 1):
                    hits = idx.index.get(rest_c[a:b])
                    if not hits:
                        continue
                    left, right = rest_c[:a], rest_c[b:]
                    for (k, sig_r, grp_r) in hits:
                        d = dict(exps_c)
                        for kk, v in _exps(grp_r).items():
                            d[kk] = d.get(kk, 0) - v
                        if d.get(("c", 0), 0) < 0:
                            continue
                        h = _prefix(d)
                        key = (k, sig_c ^ sig_r, h, left, right)
                        if key in rows:
                            continue
                        el = _row_element(alg, idx.rels[k][1], sig_c ^ sig_r, h, left, right)
                        if any(len(split_word(w)[1]) > budget.max_len for (_, w) in el.terms):
                            continue
                        if len(rows) >= budget.max_basis:
                            return Verdict("BudgetExceeded", residual=cand, basis_size=len(rows),
                                           extra={"reason": "max_basis reached"})
                        push(key, el)
                        for mm in el.terms:
                            if mm not in seen:
                                new_monos.append(mm)
        residual, combo = solver.express(target)
        if not residual:
            # exact coefficients on the rows the modular pass needed, then on all rows
            lam = _solve_exact(cand.terms, {k: rows[k].terms for k in combo})
            if lam is None:
                lam = _solve_exact(cand.terms, {k: el.terms for k, el in rows.items()})
            if lam is not None:
                return _certify(cand, rows, lam, idx, alg)
        frontier = new_monos
        rounds += 1
    residual, _ = solver.express(target)
    # report the candidate's coefficients on the monomials left unexplained
    left = Element(alg, {m: c for m, c in cand.terms.items() if m in residual})
    return Verdict("NonzeroAtBound", residual=left if left else cand, basis_size=len(rows),
                   extra={"unexplained_monomials": len(residual)})


def _certify(cand: Element, rows: dict, combo: dict, idx: RelationIndex, alg: Algebra) -> Verdict:
    total = alg.zero()
    cert = []
    extra = {}
    for key, c in combo.items():
        if key[0] == "extra":
            total = total + rows[key].scale(c)
            extra[key[1]] = c
            continue
        k, sig, h, left, right = key
        rel, red = idx.rels[k]
        # re-multiply from scratch rather than trusting the cached row
        total = total + _row_element(alg, fast_reduce(rel.element), sig, h, left, right).scale(c)
        cert.append((c, rel.label, (sig, h + left), right))
    if total != cand:
        raise AssertionError("certificate does not re-multiply to the candidate")
    return Verdict("Verified", certificate=cert, basis_size=len(rows), extra={"coefficients": extra} if extra else {})


# ---------------------------------------------------------------------------
# morphism checks
# ---------------------------------------------------------------------------

@dataclass
class InstanceResult:
    name: str
    label: str
    status: str
    certificate_size: int
    basis_size: int
    seconds: float


def _check_one(gmap, rel, target, budget) -> InstanceResult:
    t0 = time.perf_counter()
    image = gmap.apply(rel.element)
    v = check_zero(image, target, budget)
    return InstanceResult(rel.name, rel.label, v.status, len(v.certificate), v.basis_size, time.perf_counter() - t0)


_WORKER: dict = {}


def _worker_init(recipe, budget):
    from qasa.morphisms import build_check_setup

    gmap, source, target = build_check_setup(*recipe)
    _WORKER.update(gmap=gmap, source=source, target=target, budget=budget)


def _worker_run(indices):
    w = _WORKER
    rels = w["source"].relations
    return [_check_one(w["gmap"], rels[k], w["target"], w["budget"]) for k in indices]


def check_morphism(gmap, source, target, relation_filter=None, budget: Budget | None = None, jobs: int = 1):
    """Apply ``gmap`` to every selected source relation and check it in ``target``.

    Returns the per-instance results (sorted by relation name, then label) and
    a summary {name: {status: count}}.
    """
    budget = budget or Budget()
    if source.window is not None and target.window is not None:
        shift = max((source.datum.theta(i, j) for i in range(1, source.algebra.n + 1)
                     for j in range(1, source.algebra.n + 1)), default=1)
        if target.window < source.window + shift:
            raise WindowMismatch(f"target window {target.window} < source window {source.window} + {shift}")
    picked = [k for k, r in enumerate(source.relations) if relation_filter is None or r.name in relation_filter]
    results = []
    if jobs > 1 and getattr(gmap, "recipe", None) is not None and len(picked) > jobs:
        chunks = [picked[a::jobs * 4] for a in range(jobs * 4)]
        recipe = gmap.recipe[:3] + (source.window,)
        with ProcessPoolExecutor(max_workers=jobs, initializer=_worker_init, initargs=(recipe, budget)) as ex:
            for part in ex.map(_worker_run, chunks):
                results.extend(part)
    else:
        for k in picked:
            results.append(_check_one(gmap, source.relations[k], target, budget))
    results.sort(key=lambda r: (r.name, r.label))
    summary: dict = {}
    for r in results:
        summary.setdefault(r.name, {}).setdefault(r.status, 0)
        summary[r.name][r.status] += 1
    return results, summary


def default_jobs() -> int:
    return max(1, min(8, (os.cpu_count() or 1)))
