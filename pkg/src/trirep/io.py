"""JSON fixture manifests.

A manifest names algebras, modules, bimodules, subcategories, exact
categories of triples, triples and suites.  Everything is resolved and
validated on load, so a loaded manifest never holds a dangling name.

Schema (version 1)::

    {
      "version": 1,
      "name": "...",
      "budgets": {"summands": 65536, "iso": 65536, "ses": 65536, "imax": null},
      "algebras":  {"A": {"p": 2, "field": true}
                    | {"p": 2, "truncated": 2}
                    | {"p": 2, "dim": 2, "mul": [[[...]]], "unit": [...]}
                    | {"triangular": "<bimodule>"}},
      "modules":   {"S": {"algebra": "A", "dim": 1, "action": [[[...]]] | [Matrix, ...]}
                    | {"algebra": "A", "regular": true}
                    | {"algebra": "A", "zero": true}
                    | {"dual": "S"} | {"sum": ["S", "T"]}},
      "bimodules": {"M": {"left": "A", "right": "B", "regular": true}
                    | {"left": "A", "right": "B", "left_module": "S"}
                    | {"left": "A", "right": "B", "right_module": "S"}
                    | {"left": "A", "right": "B", "left_action": ..., "right_action": ...}},
      "subcategories": {"X": {"algebra": "A", "members": ["S"], "cap": 4, "mode": "explicit-list"}},
      "categories": {"E": {"kind": "E", "bimodule": "M", "x": "X", "y": "Y", "cap": 4}},
      "triples":   {"t": {"bimodule": "M", "kind": "rep", "x": "X1", "y": "Y1", "map": [[...]] | Matrix}},
      "squares":   {"sq": {"a": {"from": "A", "to": "C", "map": Matrix}, "f": ..., "b": ..., "g": ...}},
      "suites":    {"name": [{"check": "classify", ...}, ...]}
    }

Squares read ``a: A -> C``, ``f: A -> B``, ``b: B -> D``, ``g: C -> D`` and
must commute.

A ``Matrix`` is ``{"p": 2, "rows": r, "cols": c, "entries": [...]}`` with
row-major entries; nested lists are accepted wherever a matrix is.
``dim`` fields are optional and checked when given.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from . import linalg as la
from .algebra import (
    DEFAULT_BUDGET,
    Algebra,
    Module,
    ModuleHom,
    direct_sum,
    dual,
    field_algebra,
    regular_module,
    truncated_polynomial,
    validate_algebra,
    zero_module,
)
from .bimodule import Bimodule, regular_bimodule
from .diagrams import CommSquare
from .errors import MalformedInputError, TrirepError, ValidationError
from .rep import TriangularContext, TripleRep, TripleRepH
from .subcat import ECategory, MCategory, ModuleCategory, SubcategorySpec

SCHEMA_VERSION = 1
SECTIONS = ("algebras", "modules", "bimodules", "subcategories", "categories", "triples", "squares", "suites")
DEFAULT_BUDGETS = {"summands": DEFAULT_BUDGET, "iso": DEFAULT_BUDGET, "ses": DEFAULT_BUDGET, "imax": None}


class ManifestError(TrirepError):
    """A manifest could not be parsed, resolved or validated."""

    def __init__(self, message: str, where: str = "", witness=None):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where
        self.witness = witness


@dataclass
class FixtureManifest:
    name: str = ""
    algebras: dict[str, Algebra] = field(default_factory=dict)
    modules: dict[str, Module] = field(default_factory=dict)
    bimodules: dict[str, Bimodule] = field(default_factory=dict)
    contexts: dict[str, TriangularContext] = field(default_factory=dict)
    subcategories: dict[str, ModuleCategory] = field(default_factory=dict)
    categories: dict[str, ECategory | MCategory] = field(default_factory=dict)
    triples: dict[str, TripleRep | TripleRepH] = field(default_factory=dict)
    squares: dict[str, CommSquare] = field(default_factory=dict)
    suites: dict[str, list[dict]] = field(default_factory=dict)
    budgets: dict[str, Any] = field(default_factory=lambda: dict(DEFAULT_BUDGETS))
    source: str = ""

    def context_for(self, bimodule: str) -> TriangularContext:
        return self.contexts[bimodule]

    def module_name(self, mod: Module) -> str:
        for k, v in self.modules.items():
            if v is mod:
                return k
        return mod.name


def _ref(table: dict, key, section: str, where: str):
    if not isinstance(key, str):
        raise ManifestError(f"expected a name from {section!r}, got {key!r}", where)
    if key not in table:
        raise ManifestError(f"dangling reference {key!r} (no such entry in {section!r})", where)
    return table[key]


def _array(value, where: str, ndim: int, p: int | None = None) -> np.ndarray:
    """Integer array from nested lists; matrices may also use the object form."""
    if isinstance(value, dict):
        if ndim != 2:
            raise ManifestError("a matrix object is only allowed where one matrix is expected", where)
        if p is not None and value.get("p", p) != p:
            raise ManifestError(f"matrix modulus {value.get('p')} differs from {p}", where)
        try:
            return la.Matrix.from_json({"p": p, **value}).data.copy()
        except MalformedInputError as exc:
            raise ManifestError(str(exc), where) from None
    if ndim == 3 and isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        mats = [_array(v, f"{where}[{i}]", 2, p) for i, v in enumerate(value)]
        if len({a.shape for a in mats}) != 1:
            raise ManifestError("action matrices differ in shape", where)
        return np.stack(mats)
    try:
        arr = np.array(value, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise ManifestError(f"not an integer array ({exc})", where) from None
    if arr.ndim != ndim:
        raise ManifestError(f"expected a {ndim}-dimensional array, got shape {arr.shape}", where)
    return arr


def _check_dim(spec: dict, actual: int, where: str) -> None:
    if "dim" in spec and spec["dim"] != actual:
        raise ManifestError(f"declared dim {spec['dim']} but the data has dim {actual}", where)


def _build_algebra(name: str, spec: dict, where: str) -> Algebra:
    p = spec.get("p")
    if not isinstance(p, int):
        raise ManifestError("missing integer 'p'", where)
    try:
        if spec.get("field"):
            return field_algebra(p, name)
        if "truncated" in spec:
            return truncated_polynomial(p, int(spec["truncated"]), name)
        if "mul" not in spec or "unit" not in spec:
            raise ManifestError("need 'field', 'truncated' or 'mul' + 'unit'", where)
        alg = Algebra(p, _array(spec["mul"], where + ".mul", 3), _array(spec["unit"], where + ".unit", 1), name)
    except MalformedInputError as exc:
        raise ManifestError(str(exc), where) from None
    _check_dim(spec, alg.dim, where)
    rep = validate_algebra(alg)
    if not rep.valid:
        raise ManifestError(f"structure constants fail {rep.reason} at basis {rep.witness}", where, rep.witness)
    return alg


def _build_module(name: str, spec: dict, m: FixtureManifest, where: str, modules) -> Module:
    try:
        if "dual" in spec:
            return dual(_ref(modules, spec["dual"], "modules", where)).renamed(name)
        if "sum" in spec:
            parts = [_ref(modules, k, "modules", where) for k in spec["sum"]]
            if not parts:
                raise ManifestError("empty direct sum", where)
            return direct_sum(*parts, name=name)
        alg = _ref(m.algebras, spec.get("algebra"), "algebras", where)
        if spec.get("regular"):
            return regular_module(alg).renamed(name)
        if spec.get("zero"):
            return zero_module(alg).renamed(name)
        if "action" not in spec:
            raise ManifestError("need 'action', 'regular', 'zero', 'dual' or 'sum'", where)
        mod = Module(alg, _array(spec["action"], where + ".action", 3, alg.p), name)
        _check_dim(spec, mod.dim, where)
        return mod
    except ValidationError as exc:
        raise ManifestError(str(exc), where, exc.witness) from None
    except MalformedInputError as exc:
        raise ManifestError(str(exc), where) from None


def _build_bimodule(name: str, spec: dict, m: FixtureManifest, where: str, modules) -> Bimodule:
    left = _ref(m.algebras, spec.get("left"), "algebras", where)
    right = _ref(m.algebras, spec.get("right"), "algebras", where)
    try:
        if spec.get("regular"):
            if left != right:
                raise ManifestError("a regular bimodule needs left == right", where)
            return regular_bimodule(left, name)
        for side, scalars in (("left_module", right), ("right_module", left)):
            if side not in spec:
                continue
            mod = _ref(modules, spec[side], "modules", where)
            if scalars.dim != 1:
                raise ManifestError(f"{side!r} needs the other algebra to be the prime field", where)
            eye = np.eye(mod.dim, dtype=np.int64)[None]
            if side == "left_module":
                return Bimodule(left, right, mod.action, eye, name)
            return Bimodule(left, right, eye, mod.action, name)
        bim = Bimodule(left, right, _array(spec.get("left_action"), where + ".left_action", 3, left.p),
                       _array(spec.get("right_action"), where + ".right_action", 3, left.p), name)
        _check_dim(spec, bim.dim, where)
        return bim
    except ValidationError as exc:
        raise ManifestError(str(exc), where, exc.witness) from None
    except MalformedInputError as exc:
        raise ManifestError(str(exc), where) from None


def _build_triple(name: str, spec: dict, m: FixtureManifest, where: str):
    bname = spec.get("bimodule")
    _ref(m.bimodules, bname, "bimodules", where)
    ctx = m.contexts[bname]
    x = _ref(m.modules, spec.get("x"), "modules", where)
    y = _ref(m.modules, spec.get("y"), "modules", where)
    if x.algebra != ctx.A or y.algebra != ctx.B:
        raise ManifestError("components are over the wrong algebras", where)
    kind = spec.get("kind", "rep")
    cls = {"rep": TripleRep, "reph": TripleRepH}.get(kind)
    if cls is None:
        raise ManifestError(f"unknown triple kind {kind!r}", where)
    try:
        raw = spec.get("map", [])
        phi = _array(raw, where + ".map", 2, ctx.A.p) if isinstance(raw, dict) else np.array(raw, dtype=np.int64)
        return cls(ctx, x, y, phi, name)
    except (ValidationError, MalformedInputError, ValueError) as exc:
        raise ManifestError(f"structure map is not a module homomorphism ({exc})", where) from None


def _build_square(spec: dict, m: FixtureManifest, where: str) -> CommSquare:
    maps = {}
    for key in ("a", "f", "b", "g"):
        entry = spec.get(key)
        if not isinstance(entry, dict):
            raise ManifestError(f"missing map {key!r}", where)
        src = _ref(m.modules, entry.get("from"), "modules", f"{where}.{key}")
        tgt = _ref(m.modules, entry.get("to"), "modules", f"{where}.{key}")
        raw = entry.get("map", [])
        mat = _array(raw, f"{where}.{key}.map", 2, src.p) if isinstance(raw, dict) else np.array(raw, dtype=np.int64)
        try:
            maps[key] = ModuleHom(src, tgt, mat)
        except (ValidationError, MalformedInputError, ValueError) as exc:
            raise ManifestError(f"map {key!r} is not a module homomorphism ({exc})", where) from None
    try:
        return CommSquare(**maps)
    except (ValidationError, MalformedInputError) as exc:
        raise ManifestError(str(exc), where) from None


class _LazyModules:
    """Builds modules on first use, so bimodules may refer to modules and
    modules may live over a triangular algebra built from a bimodule."""

    def __init__(self, m: FixtureManifest, raw: dict):
        self.m, self.raw, self.busy = m, raw, set()

    def __contains__(self, key) -> bool:
        return key in self.raw

    def __getitem__(self, key: str) -> Module:
        if key in self.m.modules:
            return self.m.modules[key]
        if key in self.busy:
            raise ManifestError("circular module definition", f"modules.{key}")
        self.busy.add(key)
        self.m.modules[key] = _build_module(key, self.raw[key], self.m, f"modules.{key}", self)
        self.busy.discard(key)
        return self.m.modules[key]


def manifest_from_dict(data: dict, source: str = "") -> FixtureManifest:
    if not isinstance(data, dict):
        raise ManifestError("top level must be an object", source)
    version = data.get("version")
    if version != SCHEMA_VERSION:
        raise ManifestError(f"unsupported schema version {version!r} (expected {SCHEMA_VERSION})", source)
    for key in data:
        if key not in SECTIONS + ("version", "name", "budgets", "description"):
            raise ManifestError(f"unknown section {key!r}", source)
    m = FixtureManifest(name=data.get("name", ""), source=source)
    m.budgets.update(data.get("budgets", {}))
    budget = int(m.budgets["summands"])

    algs = data.get("algebras", {})
    raw_modules = data.get("modules", {})
    lazy = _LazyModules(m, raw_modules)
    pending = {}
    for name, spec in algs.items():
        if "triangular" in spec:
            pending[name] = spec
        else:
            m.algebras[name] = _build_algebra(name, spec, f"algebras.{name}")
    for name, spec in data.get("bimodules", {}).items():
        m.bimodules[name] = _build_bimodule(name, spec, m, f"bimodules.{name}", lazy)
        m.contexts[name] = TriangularContext(m.bimodules[name], name)
    for name, spec in pending.items():
        ctx = _ref(m.contexts, spec["triangular"], "bimodules", f"algebras.{name}")
        m.algebras[name] = ctx.Lambda
    m.algebras = {k: m.algebras[k] for k in algs}
    for name in raw_modules:
        lazy[name]
    m.modules = {k: m.modules[k] for k in raw_modules}

    for name, spec in data.get("subcategories", {}).items():
        where = f"subcategories.{name}"
        alg = _ref(m.algebras, spec.get("algebra"), "algebras", where)
        members = [_ref(m.modules, k, "modules", where) for k in spec.get("members", [])]
        if any(x.algebra != alg for x in members):
            raise ManifestError("member over the wrong algebra", where)
        try:
            sspec = SubcategorySpec(alg, members, int(spec.get("cap", spec.get("dim_cap", 4))), spec.get("mode", "explicit-list"), name)
        except MalformedInputError as exc:
            raise ManifestError(str(exc), where) from None
        m.subcategories[name] = ModuleCategory(sspec, budget)

    for name, spec in data.get("categories", {}).items():
        where = f"categories.{name}"
        kind = spec.get("kind")
        cls = {"E": ECategory, "M": MCategory}.get(kind)
        if cls is None:
            raise ManifestError(f"unknown category kind {kind!r}", where)
        bname = spec.get("bimodule")
        _ref(m.bimodules, bname, "bimodules", where)
        ctx = m.contexts[bname]
        xcat = _ref(m.subcategories, spec.get("x"), "subcategories", where)
        ycat = _ref(m.subcategories, spec.get("y"), "subcategories", where)
        if xcat.spec.algebra != ctx.A or ycat.spec.algebra != ctx.B:
            raise ManifestError("subcategories are over the wrong algebras", where)
        m.categories[name] = cls(ctx, xcat, ycat, int(spec.get("cap", 4)), name, budget)

    for name, spec in data.get("triples", {}).items():
        m.triples[name] = _build_triple(name, spec, m, f"triples.{name}")

    for name, spec in data.get("squares", {}).items():
        m.squares[name] = _build_square(spec, m, f"squares.{name}")

    for name, checks in data.get("suites", {}).items():
        where = f"suites.{name}"
        if not isinstance(checks, list) or not all(isinstance(c, dict) and "check" in c for c in checks):
            raise ManifestError("a suite is a list of objects with a 'check' key", where)
        m.suites[name] = checks
    return m


def load_manifest(path) -> FixtureManifest:
    """Read, resolve and validate a manifest file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ManifestError(f"cannot read manifest ({exc.strerror})", str(path)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"JSON parse error: {exc.msg} at line {exc.lineno} column {exc.colno}", str(path)) from None
    return manifest_from_dict(data, str(path))


def fixture_path(name: str) -> Path:
    """Path of a shipped fixture, by file stem (``"ut2"``) or file name."""
    fname = name if name.endswith(".json") else f"{name}.json"
    return Path(str(resources.files("trirep") / "fixtures" / fname))


def shipped_fixtures() -> list[str]:
    root = resources.files("trirep") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def resolve_fixture(arg: str) -> Path:
    """Accept a path or a shipped fixture name."""
    path = Path(arg)
    if path.exists():
        return path
    shipped = fixture_path(arg)
    if shipped.exists():
        return shipped
    raise ManifestError("no such manifest file or shipped fixture", arg)
