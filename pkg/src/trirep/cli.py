"""Command line entry point: ``trirep <verb> ...``.

Exit codes: 0 when every check passes, 1 when any check fails (or the
input is invalid), 2 when only refusals or out-of-cap verdicts remain.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import TrirepError
from .io import FixtureManifest, load_manifest, manifest_from_dict, resolve_fixture, shipped_fixtures
from .subcat import ECategory
from .suite import Report, emit_report, report_dict, run_suite

EXIT_FAIL = 1
SUBCAT_CHECKS = ("closure", "coresolving", "resolving", "frobenius", "condition-star", "extensions", "cover", "maximality")


def _add_common(p: argparse.ArgumentParser, fixture: bool = True) -> None:
    if fixture:
        p.add_argument("--fixture", required=True, help="manifest path or shipped fixture name (e.g. frob)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--report", type=Path, help="write the report here instead of stdout")
    p.add_argument("--figures", type=Path, metavar="DIR", help="render dimension-table heatmaps into DIR")
    p.add_argument("--timing", action="store_true", help="include per-check timings (not deterministic)")
    for name in ("summands", "iso", "ses"):
        p.add_argument(f"--budget-{name}", type=int, help=f"{name} enumeration budget")
    p.add_argument("--budget-imax", type=int, help="largest degree tested for Ext/Tor vanishing")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trirep", description="Exact checks for triangular matrix algebras over F_p.")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("validate", help="load and validate a manifest")
    p.add_argument("--fixture", required=True)
    p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("classify", help="classify projective/injective triples against the oracles")
    _add_common(p)
    p.add_argument("--triples", "--triple", nargs="*", help="triple names (default: all listed triples)")
    p.add_argument("--category", help="classify inside an exact category instead")

    p = sub.add_parser("subcat", help="closure, co-resolving and Frobenius checks")
    p.add_argument("action", nargs="?", choices=("check", "frobenius"), default="check",
                   help="'frobenius' is shorthand for --check frobenius")
    _add_common(p)
    p.add_argument("--category", help="an E or M category of the manifest")
    p.add_argument("--subcategory", help="a module subcategory of the manifest")
    p.add_argument("--check", action="append", choices=SUBCAT_CHECKS,
                   help="checks to run (repeatable; default depends on the target)")
    p.add_argument("--kind", default="extensions",
                   help="closure kind for --check closure, or a check name (e.g. coresolving)")

    p = sub.add_parser("diagram", help="randomized property run, or verify the squares of a bundle")
    p.add_argument("action", nargs="?", choices=("run", "verify"), default="run")
    _add_common(p, fixture=False)
    p.add_argument("--fixture", help="manifest whose algebras to use (default: a built-in set)")
    p.add_argument("--algebra", action="append", help="algebra name in the manifest (repeatable)")
    p.add_argument("--count", type=int, default=25, help="trials per algebra (four squares each)")
    p.add_argument("--max-dim", type=int, default=4)
    p.add_argument("--square", action="append", help="square name for verify (repeatable; default: all)")

    p = sub.add_parser("recollement", help="adjunctions, triangulated functors and the recollement audit")
    p.add_argument("action", nargs="?", choices=("verify",), default="verify")
    _add_common(p)
    p.add_argument("--category", required=True)

    p = sub.add_parser("suite", help="run suites or refresh golden reports")
    ssub = p.add_subparsers(dest="action", required=True)
    for action in ("run", "golden-update"):
        q = ssub.add_parser(action)
        _add_common(q)
        q.add_argument("--suite", action="append", help="suite name (repeatable; default: all suites of the fixture)")
        q.add_argument("--golden", type=Path, metavar="DIR",
                       help="golden directory (run: compare against it; golden-update: write into it)")
    sub.add_parser("fixtures", help="list the shipped fixtures")
    return ap


def _load(args) -> FixtureManifest:
    m = load_manifest(resolve_fixture(args.fixture))
    for name in ("summands", "iso", "ses", "imax"):
        value = getattr(args, f"budget_{name}", None)
        if value is not None:
            m.budgets[name] = value
    return m


def _checks_report(m: FixtureManifest, invocations: list[dict], seed: int, name: str) -> Report:
    # reuse the suite runner so seeding matches declared suites
    m.suites[f"__{name}"] = invocations
    try:
        r = run_suite(m, f"__{name}", seed)
    finally:
        del m.suites[f"__{name}"]
    r.suite = name
    return r


def _output(args, r: Report) -> int:
    data = emit_report(r, args.format, timing=args.timing)
    if args.report:
        args.report.parent.mkdir(parents=True, exist_ok=True)
        args.report.write_bytes(data)
    else:
        sys.stdout.write(data.decode())
    if args.figures:
        from .plotting import render_heatmaps

        paths = render_heatmaps(report_dict(r), args.figures)
        print(f"wrote {len(paths)} figure(s) to {args.figures}", file=sys.stderr)
    return r.exit_code()


def _golden_name(fixture_arg: str, suite: str) -> str:
    stem = Path(fixture_arg).stem if fixture_arg.endswith(".json") else fixture_arg
    return f"{stem}__{suite}.json"


def cmd_validate(args) -> int:
    m = load_manifest(resolve_fixture(args.fixture))
    summary = {
        "name": m.name,
        "algebras": {k: a.dim for k, a in m.algebras.items()},
        "bimodules": list(m.bimodules),
        "modules": len(m.modules),
        "subcategories": list(m.subcategories),
        "categories": list(m.categories),
        "triples": len(m.triples),
        "suites": list(m.suites),
    }
    if args.format == "json":
        print(json.dumps(summary, indent=2))
    else:
        print(f"{args.fixture}: valid")
        for k, v in summary.items():
            print(f"  {k}: {v}")
    return 0


def cmd_classify(args) -> int:
    m = _load(args)
    if args.category:
        inv = [{"check": "classify", "category": args.category}]
    else:
        inv = [{"check": "classify", "triples": args.triples or "all"}]
    return _output(args, _checks_report(m, inv, args.seed, "classify"))


def cmd_subcat(args) -> int:
    m = _load(args)
    if args.kind in SUBCAT_CHECKS:
        args.check = (args.check or []) + [args.kind]
        args.kind = "extensions"
    if args.action == "frobenius":
        args.check = (args.check or []) + ["frobenius"]
    if args.subcategory:
        checks = args.check or ["coresolving"]
        inv = []
        for c in checks:
            if c not in ("closure", "coresolving", "resolving"):
                raise TrirepError(f"--check {c} needs --category")
            entry = {"check": c, "subcategory": args.subcategory}
            if c == "closure":
                entry["kind"] = args.kind
            inv.append(entry)
    elif args.category:
        cat = m.categories.get(args.category)
        if cat is None:
            raise TrirepError(f"no category {args.category!r}; available: {sorted(m.categories)}")
        side = "coresolving" if isinstance(cat, ECategory) else "resolving"
        checks = args.check or ["extensions", side, "frobenius", "maximality"]
        inv = [{"check": c, "category": args.category} for c in checks]
    else:
        raise TrirepError("subcat needs --category or --subcategory")
    return _output(args, _checks_report(m, inv, args.seed, "subcat"))


BUILTIN_DIAGRAMS = {
    "version": 1,
    "algebras": {"F2": {"p": 2, "field": True}, "F3": {"p": 3, "field": True}},
}


def cmd_diagram(args) -> int:
    if args.action == "verify":
        if not args.fixture:
            raise TrirepError("diagram verify needs --fixture with a 'squares' section")
        m = _load(args)
        inv = [{"check": "square", "square": args.square or "all"}]
        return _output(args, _checks_report(m, inv, args.seed, "diagram"))
    if args.fixture:
        m = _load(args)
    else:
        m = manifest_from_dict(BUILTIN_DIAGRAMS, "built-in")
    names = args.algebra or list(m.algebras)
    inv = [{"check": "diagram-property", "algebra": a, "count": args.count, "max_dim": args.max_dim} for a in names]
    for a in names:
        if a not in m.algebras:
            raise TrirepError(f"no algebra {a!r}; available: {sorted(m.algebras)}")
    return _output(args, _checks_report(m, inv, args.seed, "diagram"))


def cmd_recollement(args) -> int:
    m = _load(args)
    inv = [{"check": c, "category": args.category} for c in ("adjoint", "triangulated", "recollement")]
    return _output(args, _checks_report(m, inv, args.seed, "recollement"))


def cmd_suite(args) -> int:
    m = _load(args)
    suites = args.suite or list(m.suites)
    base = args.report
    codes = []
    for name in suites:
        r = run_suite(m, name, args.seed)
        golden = args.golden / _golden_name(args.fixture, name) if args.golden else None
        if args.action == "golden-update":
            if golden is None:
                raise TrirepError("golden-update needs --golden DIR")
            golden.parent.mkdir(parents=True, exist_ok=True)
            golden.write_bytes(emit_report(r, "json"))
            print(f"wrote {golden}", file=sys.stderr)
            continue
        if base is not None and len(suites) > 1:
            args.report = base.with_name(f"{base.stem}__{name}{base.suffix}")
        rc = _output(args, r)
        if golden is not None:
            if not golden.exists():
                print(f"no golden report at {golden}", file=sys.stderr)
                rc = EXIT_FAIL
            elif golden.read_bytes() != emit_report(r, "json"):
                print(f"report differs from golden {golden}", file=sys.stderr)
                rc = EXIT_FAIL
        codes.append(rc)
    if EXIT_FAIL in codes:
        return EXIT_FAIL
    return 2 if 2 in codes else 0


def cmd_fixtures(args) -> int:
    for name in shipped_fixtures():
        print(name)
    return 0


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "subcat": cmd_subcat,
    "diagram": cmd_diagram,
    "recollement": cmd_recollement,
    "suite": cmd_suite,
    "fixtures": cmd_fixtures,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.verb](args)
    except TrirepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
