"""Running named suites of checks from a manifest and rendering reports."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import linalg as la
from .algebra import Module
from .bimodule import perp_inventory
from .diagrams import property_run, verify_pushout_pullback
from .errors import BudgetExceeded, MalformedInputError, OutOfCap
from .io import FixtureManifest, ManifestError
from .rep import (
    TripleRep,
    TripleRepH,
    classify_injective_reph,
    classify_projective_rep,
    enumerate_rephs,
    enumerate_reps,
    extension_oracle,
    lifting_oracle,
)
from .stable import (
    e_adjunctions,
    e_functors,
    m_adjunctions,
    m_functors,
    verify_adjoint_pair,
    verify_recollement,
    verify_triangulated_functor,
)
from .subcat import (
    ECategory,
    MCategory,
    check_closure,
    check_condition_star,
    coresolving_report,
    direct_coresolving,
    direct_resolving,
    e_classify_projective,
    enough_injectives_hull,
    enough_projectives_cover,
    frobenius_check,
    frobenius_check_m,
    is_coresolving,
    is_resolving,
    m_classify_injective,
    resolving_report,
)
from .verdict import FAIL, OUT_OF_CAP, PASS, REFUSED, Check, combine, from_bool

REPORT_VERSION = 1


@dataclass
class Report:
    suite: str | None = None
    seed: int | None = None
    checks: list[Check] = field(default_factory=list)
    timings: list[float] = field(default_factory=list)

    @property
    def status(self) -> str:
        return combine("suite", self.checks).status

    @property
    def budget_notes(self) -> list[str]:
        notes = [n for c in self.checks for n in _all_notes(c) if "budget" in n or "cap" in n]
        return list(dict.fromkeys(notes))

    def exit_code(self) -> int:
        """0 when everything passes, 1 on any failure, 2 when only refusals or partial verdicts remain."""
        return {PASS: 0, FAIL: 1}.get(self.status, 2)


def _all_notes(c: Check) -> list[str]:
    return list(c.notes) + [n for p in c.parts for n in _all_notes(p)]


# --------------------------------------------------------------------------
# individual checks


def _category(m: FixtureManifest, params: dict):
    name = params.get("category")
    if name not in m.categories:
        raise ManifestError(f"dangling reference {name!r} (no such entry in 'categories')", "suite")
    return m.categories[name]


def _subcategory(m: FixtureManifest, params: dict):
    name = params.get("subcategory")
    if name not in m.subcategories:
        raise ManifestError(f"dangling reference {name!r} (no such entry in 'subcategories')", "suite")
    return m.subcategories[name]


def _triple_label(t) -> str:
    if t.name:
        return t.name
    x, y = t.x.name or "0", t.y.name or "0"
    mat = np.asarray(t.phi if isinstance(t, TripleRep) else t.varphi).reshape(-1).tolist()
    return f"{x};{y};{''.join(map(str, mat))}"


def classify_triple(t) -> Check:
    """Both classifiers against the brute-force oracles on the Lambda-module."""
    rep = t if isinstance(t, TripleRep) else t.to_rep()
    reph = t if isinstance(t, TripleRepH) else t.to_reph()
    proj = classify_projective_rep(rep)
    inj = classify_injective_reph(reph)
    lam = t.lam
    p_oracle, i_oracle = lifting_oracle(lam), extension_oracle(lam)
    ok = proj.verdict == p_oracle and inj.verdict == i_oracle
    row = {"projective": proj.verdict, "lifting oracle": p_oracle, "injective": inj.verdict, "extension oracle": i_oracle}
    witness = None if ok else {"object": _triple_label(t), **row}
    return Check(f"classify {_triple_label(t)}", PASS if ok else FAIL, witness, details={**row, "clauses": {**proj.clauses, **inj.clauses}})


def _check_classify(m: FixtureManifest, params: dict, rng) -> Check:
    if "category" in params:
        cat = _category(m, params)
        fn = e_classify_projective if isinstance(cat, ECategory) else m_classify_injective
        parts = []
        for v in cat.objects:
            c = fn(cat, v)
            c.name = f"{c.name} {cat.label(v)}"
            parts.append(c)
        return combine(f"classify in {cat.name}", parts, objects=len(parts))
    triples = []
    sel = params.get("triples")
    if sel == "all":
        triples += list(m.triples.values())
    elif sel:
        for k in sel:
            if k not in m.triples:
                raise ManifestError(f"dangling reference {k!r} (no such entry in 'triples')", "suite")
            triples.append(m.triples[k])
    if "enumerate" in params:
        spec = params["enumerate"]
        ctx = m.contexts[spec["bimodule"]]
        xs = [m.modules[k] for k in spec["x"]]
        ys = [m.modules[k] for k in spec["y"]]
        budget = int(m.budgets["ses"])
        triples += enumerate_reps(ctx, xs, ys, budget) + enumerate_rephs(ctx, xs, ys, budget)
    parts = [classify_triple(t) for t in triples]
    what = "enumerated triples" if "enumerate" in params else "listed triples"
    return combine(f"classify {what}", parts, objects=len(parts))


def _check_closure(m, params, rng) -> Check:
    return check_closure(_subcategory(m, params).spec, params["kind"], int(m.budgets["summands"]))


def _check_coresolving(m, params, rng) -> Check:
    if "subcategory" in params:
        return is_coresolving(_subcategory(m, params).spec, int(m.budgets["summands"]))
    cat = _category(m, params)
    if not isinstance(cat, ECategory):
        raise MalformedInputError(f"co-resolving checks need an E category, {cat.name} is not one")
    crit = coresolving_report(cat)
    return combine(f"co-resolving {cat.name}", [crit, direct_coresolving(cat)])


def _check_resolving(m, params, rng) -> Check:
    if "subcategory" in params:
        return is_resolving(_subcategory(m, params).spec, int(m.budgets["summands"]))
    cat = _category(m, params)
    if not isinstance(cat, MCategory):
        raise MalformedInputError(f"resolving checks need an M category, {cat.name} is not one")
    return combine(f"resolving {cat.name}", [resolving_report(cat), direct_resolving(cat)])


def _check_frobenius(m, params, rng) -> Check:
    cat = _category(m, params)
    return frobenius_check(cat) if isinstance(cat, ECategory) else frobenius_check_m(cat)


def _check_star(m, params, rng) -> Check:
    return check_condition_star(_category(m, params))


def _check_cover(m, params, rng) -> Check:
    cat = _category(m, params)
    build = enough_projectives_cover if isinstance(cat, ECategory) else enough_injectives_hull
    parts = []
    for v in cat.objects:
        if not v.dim:
            continue
        name = f"{'cover' if isinstance(cat, ECategory) else 'hull'} {cat.label(v)}"
        try:
            res = build(cat, v)
        except OutOfCap as exc:
            parts.append(Check(name, OUT_OF_CAP, notes=[str(exc)]))
            continue
        parts.append(combine(name, res.checks))
    return combine(f"approximations in {cat.name}", parts, objects=len(parts))


def _adjunctions(cat):
    return e_adjunctions(cat) if isinstance(cat, ECategory) else m_adjunctions(cat)


def _functors(cat):
    return e_functors(cat) if isinstance(cat, ECategory) else m_functors(cat)


def _check_adjoint(m, params, rng) -> Check:
    cat = _category(m, params)
    adjs = _adjunctions(cat)
    keys = [params["pair"]] if "pair" in params else list(adjs)
    stable = params.get("stable", True)
    cache: dict = {}
    parts = []
    for k in keys:
        if k not in adjs:
            raise MalformedInputError(f"unknown adjoint pair {k!r}; choose from {sorted(adjs)}")
        parts.append(verify_adjoint_pair(adjs[k], stable=stable, cache=cache))
    return combine(f"adjunctions in {cat.name}", parts)


def _check_triangulated(m, params, rng) -> Check:
    cat = _category(m, params)
    fs = _functors(cat)
    keys = [params["functor"]] if "functor" in params else list(fs)
    cache: dict = {}
    return combine(f"triangulated functors on {cat.name}", [verify_triangulated_functor(fs[k], cache) for k in keys])


def _check_recollement(m, params, rng) -> Check:
    return verify_recollement(_category(m, params), int(m.budgets["iso"]))


def _check_diagrams(m, params, rng) -> Check:
    alg = m.algebras[params["algebra"]]
    run = property_run(alg, int(params.get("count", 25)), rng, int(params.get("max_dim", 4)))
    return Check(f"diagram properties over {alg.name}", PASS if run.ok else FAIL,
                 run.failures[0] if run.failures else None,
                 details={"squares": run.squares, "row-shaped": run.row_shaped, "snakes": run.snakes, "failures": len(run.failures)})


def _check_square(m, params, rng) -> Check:
    sel = params.get("square", "all")
    names = list(m.squares) if sel == "all" else [sel] if isinstance(sel, str) else list(sel)
    parts = []
    for name in names:
        if name not in m.squares:
            raise ManifestError(f"dangling reference {name!r} (no such entry in 'squares')", "suite")
        rep = verify_pushout_pullback(m.squares[name])
        bad = [k for k, v in rep.lemma_checks.items() if not v]
        if rep.pushout_pullback_confirmed is False:
            bad.append(f"{rep.row_shape} square is not both pushout and pullback")
        parts.append(from_bool(f"square {name}", not bad, {"failed": bad} if bad else None,
                               pushout=rep.pushout, pullback=rep.pullback, row_shape=rep.row_shape,
                               conclusions=len(rep.lemma_checks)))
    return combine("diagram squares", parts, objects=len(parts))


def _check_extensions(m, params, rng) -> Check:
    cat = _category(m, params)
    c = cat.extension_check()
    c.name = f"extensions in {cat.name}"
    return c


def _check_maximality(m, params, rng) -> Check:
    """Every object of the relevant inventory lies in the largest admissible one."""
    cat = _category(m, params)
    e_side = isinstance(cat, ECategory)
    hyp = coresolving_report(cat) if e_side else resolving_report(cat)
    name = f"maximality in {cat.name}"
    if not hyp.passed:
        return Check(name, REFUSED, {"missing hypothesis": hyp.name})
    inv = cat.xcat if e_side else cat.ycat
    imax = m.budgets.get("imax")
    perp = perp_inventory(cat.ctx.bimodule, [v for v in inv.objects if v.dim], "X" if e_side else "Y", imax)
    bad = [(v.name, i) for v, i in perp.rejected]
    what = "X" if e_side else "Y"
    return from_bool(name, not bad, {"outside": bad[0][0], "degree": bad[0][1]} if bad else None,
                     checked=len(perp.members) + len(perp.rejected), imax=perp.imax, inventory=what)


CHECKS: dict[str, Callable[[FixtureManifest, dict, Any], Check]] = {
    "classify": _check_classify,
    "closure": _check_closure,
    "coresolving": _check_coresolving,
    "resolving": _check_resolving,
    "frobenius": _check_frobenius,
    "condition-star": _check_star,
    "cover": _check_cover,
    "adjoint": _check_adjoint,
    "triangulated": _check_triangulated,
    "recollement": _check_recollement,
    "diagram-property": _check_diagrams,
    "square": _check_square,
    "extensions": _check_extensions,
    "maximality": _check_maximality,
}


def _leaf_failures(c: Check) -> list[str]:
    if not c.parts:
        return [c.name] if c.status == FAIL else []
    return [n for p in c.parts for n in _leaf_failures(p)]


def _apply_expectation(c: Check, expect: dict) -> Check:
    """Wrap a check whose outcome is known in advance (negative controls)."""
    problems = []
    if "status" in expect and c.status != expect["status"]:
        problems.append(f"status {c.status}, expected {expect['status']}")
    if "clause" in expect and expect["clause"] not in _leaf_failures(c):
        problems.append(f"clause {expect['clause']!r} did not fail")
    for k, v in expect.get("details", {}).items():
        if c.details.get(k) != v:
            problems.append(f"{k} = {c.details.get(k)!r}, expected {v!r}")
    return Check(f"expected outcome of {c.name}", FAIL if problems else PASS,
                 {"mismatch": problems} if problems else None, details={"expected": expect}, parts=[c])


def run_check(m: FixtureManifest, params: dict, rng) -> Check:
    kind = params.get("check")
    if kind not in CHECKS:
        raise MalformedInputError(f"unknown check {kind!r}; choose from {sorted(CHECKS)}")
    try:
        c = CHECKS[kind](m, params, rng)
    except BudgetExceeded as exc:
        c = Check(kind, OUT_OF_CAP, notes=[f"budget: {exc}"])
    except OutOfCap as exc:
        c = Check(kind, OUT_OF_CAP, notes=[str(exc)])
    if "expect" in params:
        c = _apply_expectation(c, params["expect"])
    return c


def run_suite(m: FixtureManifest, suite_name: str, seed: int = 0) -> Report:
    """Run the named suite's checks in declaration order.

    Each check gets its own generator seeded by ``(seed, position)``, so a
    check's randomness does not depend on the ones before it.
    """
    if suite_name not in m.suites:
        raise ManifestError(f"unknown suite {suite_name!r}; available: {sorted(m.suites)}", m.source)
    report = Report(suite_name, seed)
    for pos, params in enumerate(m.suites[suite_name]):
        rng = np.random.default_rng([seed, pos])
        t0 = time.perf_counter()
        report.checks.append(run_check(m, params, rng))
        report.timings.append(time.perf_counter() - t0)
    return report


# --------------------------------------------------------------------------
# rendering


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Module):
        return obj.name or f"<dim {obj.dim}>"
    if isinstance(obj, la.Subspace):
        return obj.basis.tolist()
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def report_dict(r: Report, timing: bool = False) -> dict:
    out: dict[str, Any] = {"version": REPORT_VERSION}
    if r.suite is not None:
        out["suite"] = r.suite
        out["seed"] = r.seed
        out["status"] = r.status
    out["checks"] = [c.to_json() for c in r.checks]
    if timing and r.timings:
        out["timings"] = [round(t, 3) for t in r.timings]
    notes = r.budget_notes
    if notes:
        out["budget_notes"] = notes
    return out


def _text_lines(c: dict, depth: int) -> list[str]:
    pad = "  " * depth
    line = f"{pad}[{c['status'].upper()}] {c['name']}"
    if "witness" in c:
        line += "  witness=" + json.dumps(c["witness"], default=_jsonable, sort_keys=True)
    lines = [line]
    lines += [f"{pad}  note: {n}" for n in c.get("notes", [])]
    for p in c.get("parts", []):
        lines += _text_lines(p, depth + 1)
    return lines


def emit_report(r: Report, fmt: str = "json", timing: bool = False) -> bytes:
    """Deterministic rendering; timings only when asked for."""
    data = json.loads(json.dumps(report_dict(r, timing), default=_jsonable))
    if fmt == "json":
        return (json.dumps(data, indent=2) + "\n").encode()
    if fmt != "text":
        raise MalformedInputError(f"unknown report format {fmt!r}")
    head = f"report v{data['version']}"
    if "suite" in data:
        head += f"  suite={data['suite']}  seed={data['seed']}  status={data['status']}"
    lines = [head]
    for i, c in enumerate(data["checks"]):
        lines += _text_lines(c, 0)
        if "timings" in data:
            lines.append(f"  time: {data['timings'][i]:.3f}s")
    lines += [f"budget: {n}" for n in data.get("budget_notes", [])]
    return ("\n".join(lines) + "\n").encode()


def text_verdicts(text: bytes) -> list[str]:
    """Top-level verdicts read back from a text report."""
    out = []
    for line in text.decode().splitlines():
        if line.startswith("["):
            out.append(line[1 : line.index("]")].lower())
    return out
