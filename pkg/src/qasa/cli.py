"""Command-line entry point.

Family short names:

    osp1    osp(1|2n)^(1)     dual a2n2  A_{2n}^(2)
    sl2     sl(1|2n)^(2)      dual bn1   B_n^(1)
    osp2-2  osp(2|2n)^(2)     dual dn12  D_{n+1}^(2)

Exit codes: 0 success, 1 a verification did not come out Verified, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field

from qasa.cartan import Family, UnsupportedRank, build_datum, in_index_set
from qasa.scalars.field import format_scalar
from qasa.scalars.structure import o_sign_power, u_coeff, u_prime_coeff

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SCHEMA_VERSION = 1

FAMILY_HELP = ("osp1=osp(1|2n)^(1), sl2=sl(1|2n)^(2), osp2-2=osp(2|2n)^(2), "
               "a2n2=A_{2n}^(2), bn1=B_n^(1), dn12=D_{n+1}^(2)")


class UsageError(Exception):
    pass


@dataclass
class RunManifest:
    """Everything needed to reproduce a report."""

    command: str
    family: str | None = None
    rank: int | None = None
    style: str | None = None
    window: int | None = None
    budget: dict | None = None
    output: str = "text"
    options: dict = field(default_factory=dict)
    seed: str | None = None
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "RunManifest":
        return cls(**data)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _family(name: str) -> Family:
    try:
        return Family.from_short(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _rank(args) -> int:
    if args.rank < 1:
        raise UsageError(f"--rank must be >= 1, got {args.rank}")
    return args.rank


def _budget(args):
    from qasa.verify import Budget

    try:
        return Budget(max_len=args.max_len, window=args.window)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _manifest(args, **kw) -> RunManifest:
    m = RunManifest(command=args.command, output="json" if args.json else "text",
                    seed=os.environ.get("QASA_SEED"))
    for k, v in kw.items():
        setattr(m, k, v)
    return m


def _emit(args, manifest: RunManifest, result: dict, lines: list, ok: bool, seconds: float) -> int:
    if args.json:
        report = {"manifest": manifest.to_json(), "status": "ok" if ok else "failed", "result": result}
        if not args.no_timings:
            report["timings"] = {"seconds": round(seconds, 3)}
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    else:
        for line in lines:
            print(line)
        if not args.no_timings:
            print(f"# {seconds:.2f}s")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_cartan_dump(args) -> int:
    t0 = time.perf_counter()
    fam = _family(args.family)
    n = _rank(args)
    try:
        d = build_datum(fam, n)
    except UnsupportedRank as exc:
        raise UsageError(str(exc)) from None
    data = d.to_json()
    lines = [f"{fam.label}, n = {n}"] + [f"{k}: {v}" for k, v in sorted(data.items())]
    return _emit(args, _manifest(args, family=fam.short, rank=n), data, lines, True, time.perf_counter() - t0)


def cmd_u_table(args) -> int:
    t0 = time.perf_counter()
    fam = _family(args.family)
    n = _rank(args)
    sup = fam if fam.is_super else fam.partner
    dual = sup.partner
    rows, lines, ok = [], [], True
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for r in range(-args.r_max, args.r_max + 1):
                if r == 0 or not (in_index_set(sup, n, i, r) and in_index_set(sup, n, j, r)):
                    continue
                u = u_coeff(sup, n, i, j, r)
                up = u_prime_coeff(dual, n, i, j, r)
                sign = o_sign_power(n, sup, i, r) * o_sign_power(n, sup, j, r)
                match = u == up * sign
                ok &= match
                rows.append({"i": i, "j": j, "r": r, "u": format_scalar(u), "u_prime": format_scalar(up),
                             "sign": 1 if sign.is_one() else -1, "compatible": match})
                lines.append(f"u[{i},{j},{r}] = {format_scalar(u)}    u'[{i},{j},{r}] = {format_scalar(up)}"
                             f"    {'ok' if match else 'MISMATCH'}")
    result = {"family": sup.short, "dual": dual.short, "entries": rows}
    manifest = _manifest(args, family=fam.short, rank=n, options={"r_max": args.r_max})
    return _emit(args, manifest, result, lines, ok, time.perf_counter() - t0)


def cmd_kappa_hat(args) -> int:
    from qasa.presentations import OrderExceeded, kappa_hat
    from qasa.superalg import Algebra, format_element

    t0 = time.perf_counter()
    fam = _family(args.family)
    n = _rank(args)
    if not 1 <= args.node <= n:
        raise UsageError(f"--node must lie in 1..{n}")
    sign = 1 if args.sign == "+" else -1
    alg = Algebra(fam, n, "drinfeld")
    try:
        x = kappa_hat(alg, sign, args.node, args.m, args.order)
    except OrderExceeded as exc:
        raise UsageError(str(exc)) from None
    text = format_element(x)
    manifest = _manifest(args, family=fam.short, rank=n, style="drinfeld",
                         options={"node": args.node, "m": args.m, "sign": args.sign, "order": args.order})
    return _emit(args, manifest, {"element": text, "terms": len(x.terms)}, [text], True, time.perf_counter() - t0)


def cmd_relations(args) -> int:
    from qasa.presentations import WindowTooSmall, chevalley_relations, drinfeld_relations
    from qasa.superalg import format_element

    t0 = time.perf_counter()
    fam = _family(args.family)
    n = _rank(args)
    try:
        if args.style == "chevalley":
            pres = chevalley_relations(fam, n, args.smash)
        else:
            pres = drinfeld_relations(fam, n, args.window, args.smash)
    except WindowTooSmall as exc:
        raise UsageError(str(exc)) from None
    names = args.name.split(",") if args.name else None
    rels = pres.select(names)
    rows = [{"name": r.name, "label": r.label, "element": format_element(r.element)} for r in rels]
    lines = [f"{r['label']}: {r['element']}" for r in rows]
    counts = {}
    for r in rels:
        counts[r.name] = counts.get(r.name, 0) + 1
    manifest = _manifest(args, family=fam.short, rank=n, style=args.style,
                         window=args.window if args.style == "drinfeld" else None,
                         options={"smash": args.smash, "name": args.name})
    return _emit(args, manifest, {"counts": counts, "relations": rows}, lines, True, time.perf_counter() - t0)


def cmd_map(args) -> int:
    from qasa.morphisms import MAP_NAMES, build_map
    from qasa.superalg import ExprSyntaxError, format_element, format_gen, parse_element

    t0 = time.perf_counter()
    fam = _family(args.family)
    n = _rank(args)
    if args.name not in MAP_NAMES:
        raise UsageError(f"unknown map {args.name!r} (known: {', '.join(MAP_NAMES)})")
    gmap = build_map(args.name, fam, n)
    if args.apply is not None:
        try:
            x = parse_element(args.apply, gmap.source)
        except (ExprSyntaxError, ValueError) as exc:
            raise UsageError(f"cannot parse --apply: {exc}") from None
        y = gmap.apply(x)
        result = {"input": format_element(x), "image": format_element(y)}
        lines = [result["image"]]
    else:
        images = {format_gen(g): format_element(v) for g, v in gmap.images().items()}
        result = {"images": images}
        lines = [f"{k} -> {v}" for k, v in images.items()]
    result.update(source=gmap.source.tag, target=gmap.target.tag, label=gmap.label)
    manifest = _manifest(args, family=fam.short, rank=n, options={"name": args.name, "apply": args.apply})
    return _emit(args, manifest, result, lines, True, time.perf_counter() - t0)


def cmd_check(args) -> int:
    from qasa.morphisms import MAP_NAMES, build_check_setup
    from qasa.verify import check_morphism

    t0 = time.perf_counter()
    fam = _family(args.family)
    n = _rank(args)
    if args.map not in MAP_NAMES:
        raise UsageError(f"unknown map {args.map!r} (known: {', '.join(MAP_NAMES)})")
    if args.window < 2:
        raise UsageError("--window must be >= 2")
    budget = _budget(args)
    gmap, source, target = build_check_setup(args.map, fam.short, n, args.window)
    names = set(args.relations.split(",")) if args.relations else None
    if names:
        unknown = names - set(source.names())
        if unknown:
            raise UsageError(f"unknown relation names {sorted(unknown)} (known: {', '.join(source.names())})")
    results, summary = check_morphism(gmap, source, target, names, budget, jobs=args.jobs)
    ok = all(r.status == "Verified" for r in results)
    rows = []
    for r in results:
        row = {"name": r.name, "label": r.label, "status": r.status,
               "certificate_size": r.certificate_size, "basis_size": r.basis_size}
        if not args.no_timings:
            row["seconds"] = round(r.seconds, 4)
        rows.append(row)
    lines = [f"{name}: " + ", ".join(f"{s}={c}" for s, c in sorted(st.items())) for name, st in sorted(summary.items())]
    lines += [f"  {r.label}: {r.status}" for r in results if r.status != "Verified"]
    lines.append(f"{len(results)} instances, {'all Verified' if ok else 'NOT all Verified'}")
    manifest = _manifest(args, family=fam.short, rank=n, window=args.window, budget=budget.to_json(),
                         options={"map": args.map, "relations": args.relations})
    result = {"map": gmap.label, "source": source.algebra.tag, "target": target.algebra.tag,
              "target_window": target.window, "summary": summary, "instances": rows}
    return _emit(args, manifest, result, lines, ok, time.perf_counter() - t0)


def cmd_solve_c(args) -> int:
    from qasa.morphisms import NoSolution, solve_c

    t0 = time.perf_counter()
    fam = _family(args.family)
    if not fam.is_super:
        raise UsageError("solve-c expects a super family (osp1, sl2, osp2-2)")
    n = _rank(args)
    budget = _budget(args)
    try:
        res = solve_c(fam, n, budget, args.window)
        status, value, reason = res.status, res.value, res.reason
    except NoSolution as exc:
        status, value, reason = "NoSolution", None, str(exc)
    text = format_scalar(value) if value is not None else None
    result = {"status": status, "value": text, "reason": reason}
    lines = [f"c = {text}" if text is not None else f"{status}: {reason}"]
    manifest = _manifest(args, family=fam.short, rank=n, window=args.window, budget=budget.to_json())
    return _emit(args, manifest, result, lines, status == "Solved", time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common(p, window=True, budget=False):
    p.add_argument("--family", required=True, help=FAMILY_HELP)
    p.add_argument("--rank", type=int, required=True, help="n >= 1")
    if window:
        p.add_argument("--window", type=int, default=3, help="loop-index window W (default 3)")
    if budget:
        p.add_argument("--max-len", type=int, default=12, help="word-length bound L (default 12)")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.add_argument("--no-timings", action="store_true", help="omit timings so reports are byte-identical")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qasa", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("relations", help="list a relation catalogue")
    _common(p)
    p.add_argument("--style", choices=("chevalley", "drinfeld"), default="drinfeld")
    p.add_argument("--smash", action="store_true", help="use the sign-group extension")
    p.add_argument("--name", help="comma-separated relation names to keep")
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("map", help="show generator images or apply a map")
    _common(p, window=False)
    p.add_argument("--name", required=True, help="psi, phi, phi-inv, rho, Psi or Psi-composed")
    p.add_argument("--apply", help="element of the source algebra, e.g. 'xi+[1,0]*kap[1,1]'")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("check", help="verify that a map preserves the source relations")
    _common(p, budget=True)
    p.add_argument("--map", required=True, help="psi, phi, phi-inv, rho, Psi or Psi-composed")
    p.add_argument("--relations", help="comma-separated relation names (default: all)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("u-table", help="tabulate the structure constants u and u'")
    _common(p, window=False)
    p.add_argument("--r-max", type=int, default=3)
    p.set_defaults(func=cmd_u_table)

    p = sub.add_parser("kappa-hat", help="expand a kappa-hat element")
    _common(p, window=False)
    p.add_argument("--node", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--sign", choices=("+", "-"), default="+")
    p.add_argument("--order", type=int, default=None)
    p.set_defaults(func=cmd_kappa_hat)

    for name in ("cartan-dump", "cartan"):
        p = sub.add_parser(name, help="dump the Cartan datum" if name == "cartan-dump" else "alias: cartan dump")
        if name == "cartan":
            p.add_argument("action", choices=("dump",))
        _common(p, window=False)
        p.set_defaults(func=cmd_cartan_dump, command="cartan-dump")

    p = sub.add_parser("solve-c", help="solve for the constant c_g of the e_0/f_0 images")
    _common(p, budget=True)
    p.set_defaults(func=cmd_solve_c)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits 2
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
