"""JSON workspaces: named algebras, modules, morphisms, subcategories and sequences.

A workspace file is one JSON object with the keys ``algebras``, ``modules``,
``morphisms``, ``subcategories`` and ``sequences``. Matrices are row-major
integer arrays, reduced mod p on load. :func:`dumps` writes the canonical form
(sorted keys, one matrix row per line), so ``dumps(parse(text)) == text`` for a
canonical file.

Algebras are given either by a presentation::

    {"p": 2, "presentation": {"kind": "truncated_polynomial", "degree": 2}}

or by structure constants ``{"p", "basis", "mult", "unit"}``. Modules give
``{"algebra", "action"}`` with one matrix per basis element; on input a
nilpotent ``"x"`` (truncated polynomial algebras) or a ``"representation"``
(path algebras) is accepted instead. Sequences are recipes, built on demand:

* ``{"kind": "complex", "maps": [...]}``: maps in left-to-right order
* ``{"kind": "resolution" | "coresolution", "module", "subcategory", "length"}``
* ``{"kind": "window", "module", "subcategory", "depth"}``: spliced halves
* ``{"kind": "product_window", "parts": [...], "subcategory", "module"}``
* ``{"kind": "explicit_window", "maps", "split", "left_open", "right_open",
  "module", "subcategory"}``; ``subcategory`` may be omitted, in which case the
  window is checked against its own terms
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .approx import Subcategory, add
from .fixtures import polynomial_module, representation
from .gorenstein import Window, complete_window, verify_complete_resolution, window_sum
from .modcat import (
    Algebra,
    Module,
    Morphism,
    Verdict,
    algebra_from_presentation,
    validate_algebra,
    validate_module,
    validate_morphism,
)
from .resolve import INF, build_coproper_coresolution, build_proper_resolution

SECTIONS = ("algebras", "modules", "morphisms", "subcategories", "sequences")
SEQUENCE_KINDS = ("complex", "resolution", "coresolution", "window", "product_window", "explicit_window")


class WorkspaceError(Exception):
    """Malformed input or a reference to an unknown name."""


def _matrix(value, rows=None, cols=None, what="matrix") -> np.ndarray:
    try:
        a = np.array(value, dtype=np.int64)
    except (TypeError, ValueError, OverflowError) as exc:
        raise WorkspaceError(f"{what}: not an integer array") from exc
    if a.ndim == 1 and a.size == 0:
        a = a.reshape(rows or 0, cols or 0)
    if a.ndim != 2:
        raise WorkspaceError(f"{what}: expected a 2-d array")
    if rows is not None and cols is not None and a.shape != (rows, cols):
        if a.size == 0 and rows * cols == 0:
            return np.zeros((rows, cols), dtype=np.int64)
        raise WorkspaceError(f"{what}: shape {a.shape}, expected {(rows, cols)}")
    return a


def _need(d: dict, key: str, where: str):
    if not isinstance(d, dict):
        raise WorkspaceError(f"{where}: expected an object")
    if key not in d:
        raise WorkspaceError(f"{where}: missing {key!r}")
    return d[key]


@dataclass
class Workspace:
    algebras: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    subcategories: dict = field(default_factory=dict)
    sequences: dict = field(default_factory=dict)  # name -> recipe dict
    _built: dict = field(default_factory=dict, repr=False)
    _adhoc: dict = field(default_factory=dict, repr=False)

    # lookups ---------------------------------------------------------
    def _get(self, section: str, name: str):
        table = getattr(self, section)
        if name not in table:
            raise WorkspaceError(f"unknown {section[:-1]} {name!r}")
        return table[name]

    def algebra(self, name: str) -> Algebra:
        return self._get("algebras", name)

    def module(self, name: str) -> Module:
        return self._get("modules", name)

    def morphism(self, name: str) -> Morphism:
        return self._get("morphisms", name)

    def subcategory(self, name: str) -> Subcategory:
        """A declared subcategory, or ``add(A,B,...)`` over declared modules."""
        if name in self.subcategories:
            return self.subcategories[name]
        if name in self._adhoc:
            return self._adhoc[name]
        m = re.fullmatch(r"add\((.*)\)", name.strip())
        if not m:
            raise WorkspaceError(f"unknown subcategory {name!r}")
        gens = [self.module(g.strip()) for g in m.group(1).split(",") if g.strip()]
        if not gens:
            raise WorkspaceError(f"empty subcategory {name!r}")
        sub = add(*gens, name=name)
        self._adhoc[name] = sub
        return sub

    def sequence(self, name: str):
        if name not in self.sequences:
            raise WorkspaceError(f"unknown sequence {name!r}")
        if name not in self._built:
            self._built[name] = self._build(name, self.sequences[name])
        return self._built[name]

    def name_of(self, m: Module) -> str | None:
        for k, v in self.modules.items():
            if v is m:
                return k
        return None

    # sequence recipes ------------------------------------------------
    def _build(self, name: str, recipe: dict):
        kind = recipe["kind"]
        if kind == "complex":
            return [self.morphism(n) for n in recipe["maps"]]
        if kind == "resolution":
            return build_proper_resolution(self.subcategory(recipe["subcategory"]), self.module(recipe["module"]),
                                           int(recipe["length"]))
        if kind == "coresolution":
            return build_coproper_coresolution(self.subcategory(recipe["subcategory"]), self.module(recipe["module"]),
                                               int(recipe["length"]))
        if kind == "window":
            return complete_window(self.subcategory(recipe["subcategory"]), self.module(recipe["module"]),
                                   int(recipe["depth"]))
        if kind == "product_window":
            parts = [self.sequence(p) for p in recipe["parts"]]
            pivot = self.module(recipe["module"]) if "module" in recipe else None
            try:
                return window_sum(self.subcategory(recipe["subcategory"]), parts, pivot=pivot)
            except ValueError as exc:
                raise WorkspaceError(f"sequence {name!r}: {exc}") from exc
        if kind == "explicit_window":
            maps = [self.morphism(n) for n in recipe["maps"]]
            for a, b in zip(maps, maps[1:]):
                if b.source is not a.target:
                    raise WorkspaceError(f"sequence {name!r}: maps are not composable")
            w = Window(maps, int(recipe["split"]), bool(recipe.get("left_open", True)),
                       bool(recipe.get("right_open", True)))
            if "subcategory" in recipe:
                C = self.subcategory(recipe["subcategory"])
            else:
                seen = []
                for t in w.terms:
                    if t.dim and all(t is not s for s in seen):
                        seen.append(t)
                C = add(*seen, name=f"terms({name})")
            return verify_complete_resolution(C, w, self.module(recipe["module"]))
        raise WorkspaceError(f"sequence {name!r}: unknown kind {kind!r}")


# ---------------------------------------------------------------- parsing


def _parse_algebra(name: str, d: dict) -> Algebra:
    p = _need(d, "p", f"algebra {name}")
    if not isinstance(p, int) or p < 2:
        raise WorkspaceError(f"algebra {name}: bad modulus {p!r}")
    if "presentation" in d:
        try:
            return algebra_from_presentation(p, d["presentation"], name)
        except (KeyError, TypeError, ValueError) as exc:
            raise WorkspaceError(f"algebra {name}: {exc}") from exc
    try:
        mult = np.array(_need(d, "mult", f"algebra {name}"), dtype=np.int64)
        unit = np.array(_need(d, "unit", f"algebra {name}"), dtype=np.int64)
    except (TypeError, ValueError, OverflowError) as exc:
        raise WorkspaceError(f"algebra {name}: structure constants are not integers") from exc
    if mult.ndim != 3 or len(set(mult.shape)) != 1 or unit.shape != (mult.shape[0],):
        raise WorkspaceError(f"algebra {name}: mult must be d x d x d and unit of length d")
    basis = d.get("basis") or [f"e{i}" for i in range(mult.shape[0])]
    return Algebra(name, p, mult, unit, list(basis))


def _parse_module(name: str, d: dict, ws: Workspace) -> Module:
    alg = ws.algebra(_need(d, "algebra", f"module {name}"))
    if "action" in d:
        try:
            a = np.array(d["action"], dtype=np.int64)
        except (TypeError, ValueError, OverflowError) as exc:
            raise WorkspaceError(f"module {name}: action is not an integer array") from exc
        if a.size == 0:
            a = a.reshape(alg.dim, 0, 0)
        if a.ndim != 3 or a.shape[0] != alg.dim or a.shape[1] != a.shape[2]:
            raise WorkspaceError(f"module {name}: action must have shape ({alg.dim}, n, n)")
        return Module(alg, a, name)
    if "x" in d:
        if (alg.presentation or {}).get("kind") != "truncated_polynomial":
            raise WorkspaceError(f"module {name}: 'x' needs a truncated polynomial algebra")
        x = _matrix(d["x"], what=f"module {name}")
        if x.shape[0] != x.shape[1]:
            raise WorkspaceError(f"module {name}: x must be square")
        return polynomial_module(alg, x, name)
    if "representation" in d:
        rep = d["representation"]
        try:
            return representation(alg, dict(rep["dims"]), dict(rep.get("arrows", {})), name)
        except (KeyError, TypeError, ValueError) as exc:
            raise WorkspaceError(f"module {name}: {exc}") from exc
    raise WorkspaceError(f"module {name}: give 'action', 'x' or 'representation'")


def _check_recipe(name: str, recipe: dict, ws: Workspace, raw_seq: dict):
    kind = _need(recipe, "kind", f"sequence {name}")
    if kind not in SEQUENCE_KINDS:
        raise WorkspaceError(f"sequence {name}: unknown kind {kind!r}")
    if kind in ("complex", "explicit_window"):
        for n in _need(recipe, "maps", f"sequence {name}"):
            ws.morphism(n)
    if kind in ("resolution", "coresolution", "window"):
        ws.module(_need(recipe, "module", f"sequence {name}"))
        ws.subcategory(_need(recipe, "subcategory", f"sequence {name}"))
        key = "depth" if kind == "window" else "length"
        if not isinstance(_need(recipe, key, f"sequence {name}"), int):
            raise WorkspaceError(f"sequence {name}: {key} must be an integer")
    if kind == "product_window":
        ws.subcategory(_need(recipe, "subcategory", f"sequence {name}"))
        for part in _need(recipe, "parts", f"sequence {name}"):
            if part not in raw_seq:
                raise WorkspaceError(f"sequence {name}: unknown part {part!r}")
        if "module" in recipe:
            ws.module(recipe["module"])
    if kind == "explicit_window":
        ws.module(_need(recipe, "module", f"sequence {name}"))
        _need(recipe, "split", f"sequence {name}")
        if "subcategory" in recipe:
            ws.subcategory(recipe["subcategory"])


def from_dict(doc: dict) -> Workspace:
    if not isinstance(doc, dict):
        raise WorkspaceError("a workspace must be a JSON object")
    unknown = set(doc) - set(SECTIONS)
    if unknown:
        raise WorkspaceError(f"unknown top-level keys {sorted(unknown)}")
    ws = Workspace()
    for name, d in sorted(doc.get("algebras", {}).items()):
        ws.algebras[name] = _parse_algebra(name, d)
    for name, d in sorted(doc.get("modules", {}).items()):
        ws.modules[name] = _parse_module(name, d, ws)
    for name, d in sorted(doc.get("morphisms", {}).items()):
        src = ws.module(_need(d, "source", f"morphism {name}"))
        tgt = ws.module(_need(d, "target", f"morphism {name}"))
        mat = _matrix(_need(d, "matrix", f"morphism {name}"), tgt.dim, src.dim, f"morphism {name}")
        if not src.algebra.same_as(tgt.algebra):
            raise WorkspaceError(f"morphism {name}: source and target live over different algebras")
        ws.morphisms[name] = Morphism(src, tgt, mat)
    for name, d in sorted(doc.get("subcategories", {}).items()):
        gens = [ws.module(g) for g in _need(d, "generators", f"subcategory {name}")]
        if not gens:
            raise WorkspaceError(f"subcategory {name}: no generators")
        try:
            ws.subcategories[name] = Subcategory(name, gens)
        except ValueError as exc:
            raise WorkspaceError(f"subcategory {name}: {exc}") from exc
    raw_seq = doc.get("sequences", {})
    for name, recipe in sorted(raw_seq.items()):
        _check_recipe(name, recipe, ws, raw_seq)
        ws.sequences[name] = json.loads(json.dumps(recipe))
    return ws


def parse(text: str) -> Workspace:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkspaceError(f"not valid JSON: {exc}") from exc
    return from_dict(doc)


def load(path) -> Workspace:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise WorkspaceError(f"cannot read {path}: {exc}") from exc
    return parse(text)


def default_workspace_path() -> Path:
    return Path(__file__).with_name("data") / "fixtures.json"


def load_default() -> Workspace:
    return load(default_workspace_path())


# ---------------------------------------------------------------- validation


def validate_workspace(ws: Workspace) -> list[tuple[str, str, Verdict]]:
    """``(section, name, verdict)`` for every entity, in canonical order."""
    out = []
    for name, alg in sorted(ws.algebras.items()):
        out.append(("algebras", name, validate_algebra(alg)))
    for name, m in sorted(ws.modules.items()):
        out.append(("modules", name, validate_module(m)))
    for name, f in sorted(ws.morphisms.items()):
        out.append(("morphisms", name, validate_morphism(f)))
    return out


# ---------------------------------------------------------------- output


def _ints(a) -> list:
    return np.asarray(a).astype(np.int64).tolist()


def algebra_to_dict(alg: Algebra) -> dict:
    if alg.presentation:
        return {"p": alg.p, "presentation": alg.presentation}
    return {"p": alg.p, "basis": list(alg.basis_names), "mult": _ints(alg.mult), "unit": _ints(alg.unit)}


def module_to_dict(m: Module, algebra_name: str) -> dict:
    return {"algebra": algebra_name, "action": _ints(m.action)}


def to_dict(ws: Workspace) -> dict:
    alg_names = {id(a): n for n, a in ws.algebras.items()}
    mod_names = {id(m): n for n, m in ws.modules.items()}

    def alg_name(a):
        if id(a) in alg_names:
            return alg_names[id(a)]
        for n, b in ws.algebras.items():
            if b.same_as(a):
                return n
        raise WorkspaceError("module over an unregistered algebra")

    return {
        "algebras": {n: algebra_to_dict(a) for n, a in ws.algebras.items()},
        "modules": {n: module_to_dict(m, alg_name(m.algebra)) for n, m in ws.modules.items()},
        "morphisms": {n: {"source": mod_names[id(f.source)], "target": mod_names[id(f.target)],
                          "matrix": _ints(f.matrix)} for n, f in ws.morphisms.items()},
        "subcategories": {n: {"generators": [mod_names[id(g)] for g in s.generators]}
                          for n, s in ws.subcategories.items()},
        "sequences": dict(ws.sequences),
    }


def _is_flat_int_list(v) -> bool:
    return isinstance(v, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in v)


def _fmt(v, level: int) -> str:
    pad = "  " * level
    inner = "  " * (level + 1)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {_fmt(v[k], level + 1)}" for k in sorted(v)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(v, list):
        if not v:
            return "[]"
        if _is_flat_int_list(v) or all(isinstance(x, str) for x in v):
            return json.dumps(v, ensure_ascii=False)
        items = [inner + _fmt(x, level + 1) for x in v]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(v, ensure_ascii=False)


def dump_json(doc) -> str:
    """Canonical text: sorted keys, two-space indent, integer rows inline."""
    return _fmt(doc, 0) + "\n"


def dumps(ws: Workspace) -> str:
    return dump_json(to_dict(ws))


def save(ws: Workspace, path) -> None:
    Path(path).write_text(dumps(ws), encoding="utf-8")


# ---------------------------------------------------------------- constructed objects


def morphism_to_dict(f: Morphism) -> dict:
    return {"source_dim": f.source.dim, "target_dim": f.target.dim, "matrix": _ints(f.matrix)}


def resolution_to_dict(res) -> dict:
    d = res.summary()
    d["maps"] = [morphism_to_dict(f) for f in res.maps]
    return d


def window_to_dict(cr) -> dict:
    return {
        "label": cr.label,
        "dims": cr.window.dims(),
        "split": cr.window.split,
        "left_open": cr.window.left_open,
        "right_open": cr.window.right_open,
        "depth": "inf" if cr.depth == INF else int(cr.depth),
        "pivot_dim": cr.pivot.dim,
        "certificates": {k: verdict_to_dict(v) for k, v in sorted(cr.certificates.items())},
        "maps": [morphism_to_dict(f) for f in cr.window.maps],
    }


def verdict_to_dict(v) -> dict:
    if v is None:
        return {"ok": None}
    d = {"ok": bool(v)}
    if not v:
        d["reason"] = v.reason
        d["position"] = v.position
    return d
