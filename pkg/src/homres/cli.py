"""Command line: ``homres validate|compute|construct|report``.

Exit codes: 0 when the outcome matches ``--expect`` (default ``pass``), 1 on
a refuted certificate or a violated hypothesis, 2 on malformed input or an
unknown name. ``compute`` only fails with 1 when ``--expect`` is given.
Reports are JSON with sorted keys; ``report`` prints text unless ``--json``.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .approx import (
    ext_dims,
    is_hom_from_C_exact,
    is_hom_into_C_exact,
    is_in_add,
    is_strongly_exact,
    reduced_left_approx,
    reduced_right_approx,
)
from .dimension import (
    DimensionReport,
    GenCogenPair,
    GorensteinClass,
    MissingWitness,
    c_dim_report,
    codim_report,
    cor_5_12_sequences,
    g_codim_report,
    gdim_report,
    prop_5_1_rebuild,
    thm_5_3_swap,
    thm_5_5_witness,
)
from .dot import Diagram
from .gorenstein import (
    CompleteResolution,
    contractible_inner,
    g_membership,
    thm_4_1_collapse,
    thm_4_6_summand,
    verify_complete_resolution,
)
from .modcat import HomSpace, Module, Morphism, is_exact, zero_map
from .resolve import (
    ITERATE_MODES,
    AugmentedResolution,
    HypothesisViolation,
    Obstruction,
    iterate_construct,
    thm_3_2_construct,
    thm_3_4_construct,
    thm_3_6_construct,
    thm_3_8_construct,
)
from .serialize import (
    Workspace,
    WorkspaceError,
    _ints,
    default_workspace_path,
    dump_json,
    load,
    morphism_to_dict,
    resolution_to_dict,
    validate_workspace,
    verdict_to_dict,
    window_to_dict,
)

CONSTRUCTIONS = {
    "resolve-left": "3.2",
    "coresolve-right": "3.4",
    "resolve-right": "3.6",
    "coresolve-left": "3.8",
    **ITERATE_MODES,
    "collapse": "4.1",
    "summand": "4.6",
    "rebuild": "5.1",
    "swap": "5.3",
    "mixed-witness": "5.5",
    "g-precover": "5.12",
}
KEYS = sorted(set(CONSTRUCTIONS.values()), key=lambda k: tuple(int(x) for x in k.split(".")))


class Failure(Exception):
    """A hypothesis or certificate failed; maps to exit code 1."""


# ---------------------------------------------------------------- helpers


def _workspace(args) -> Workspace:
    return load(args.workspace or default_workspace_path())


def _names(text: str | None) -> list[str]:
    return [t.strip() for t in (text or "").split(",") if t.strip()]


def _maps_of(ws: Workspace, name: str) -> list[Morphism]:
    s = ws.sequence(name)
    if isinstance(s, AugmentedResolution):
        return s.core_maps()
    if isinstance(s, CompleteResolution):
        return list(s.window.maps)
    return s


def _padded(maps: list[Morphism]) -> list[Morphism]:
    z = Module.zero(maps[0].source.algebra)
    return [zero_map(z, maps[0].source)] + list(maps) + [zero_map(maps[-1].target, z)]


def _ses(ws: Workspace, name: str) -> tuple[Morphism, Morphism]:
    maps = ws.sequence(name)
    if not isinstance(maps, list) or len(maps) != 2:
        raise WorkspaceError(f"sequence {name!r} is not a two-map complex")
    return maps[0], maps[1]


def _resolution(ws: Workspace, name: str) -> AugmentedResolution:
    r = ws.sequence(name)
    if not isinstance(r, AugmentedResolution):
        raise WorkspaceError(f"sequence {name!r} is not a resolution or coresolution")
    return r


def _window(ws: Workspace, name: str) -> CompleteResolution:
    w = ws.sequence(name)
    if not isinstance(w, CompleteResolution):
        raise WorkspaceError(f"sequence {name!r} is not a window")
    return w


def _label(ws: Workspace, m: Module) -> str:
    return ws.name_of(m) or m.name or f"dim {m.dim}"


def _need(args, *keys):
    for k in keys:
        if getattr(args, k, None) in (None, ""):
            raise WorkspaceError(f"missing --{k.replace('_', '-')}")


def _pair(ws: Workspace, args) -> GenCogenPair:
    _need(args, "sub", "gen")
    C = ws.subcategory(args.sub)
    if args.gorenstein:
        C = GorensteinClass(C, args.depth)
    gen = ws.subcategory(args.gen)
    cogen = ws.subcategory(args.cogen or args.gen)
    return GenCogenPair(C, gen, cogen)


# ---------------------------------------------------------------- validate


def _validate_one(path) -> dict:
    ws = load(path)
    entries = []
    for section, name, v in validate_workspace(ws):
        entries.append({"section": section, "name": name, **verdict_to_dict(v)})
    for name in sorted(ws.sequences):
        try:
            s = ws.sequence(name)
        except (HypothesisViolation, Obstruction, ValueError) as exc:
            entries.append({"section": "sequences", "name": name, "ok": False, "reason": str(exc)})
            continue
        if isinstance(s, CompleteResolution):
            ok, reason = s.ok, "" if s.ok else s.label
        elif isinstance(s, AugmentedResolution):
            ok = s.flags["exact"] != "verified-no"
            reason = "" if ok else "resolution is not exact"
        else:
            ok = all(g.source is f.target and (g @ f).is_zero() for f, g in zip(s, s[1:]))
            reason = "" if ok else "maps do not form a complex"
        e = {"section": "sequences", "name": name, "ok": bool(ok)}
        if not ok:
            e["reason"] = reason
        entries.append(e)
    return {"ok": all(e["ok"] for e in entries), "entities": entries}


def cmd_validate(args) -> dict:
    paths = []
    for p in args.paths or [args.workspace or default_workspace_path()]:
        p = Path(p)
        paths.extend(sorted(p.glob("*.json")) if p.is_dir() else [p])
    files, malformed = {}, False
    for p in paths:
        try:
            files[str(p)] = _validate_one(p)
        except WorkspaceError as exc:
            files[str(p)] = {"ok": False, "malformed": True, "reason": str(exc)}
            malformed = True
    if malformed:
        raise _Malformed({"files": files})
    ok = all(f["ok"] for f in files.values())
    return {"files": files, "status": "pass" if ok else "fail"}


class _Malformed(Exception):
    def __init__(self, report):
        self.report = report


# ---------------------------------------------------------------- compute


def cmd_compute(args) -> dict:
    ws = _workspace(args)
    kind, rest = args.kind, args.names
    want = {"hom": 2, "ext": 2, "approx": 2, "exactness": 1, "membership": 2}[kind]
    if len(rest) != want:
        raise WorkspaceError(f"compute {kind} takes {want} names")
    if kind == "hom":
        a, b = ws.module(rest[0]), ws.module(rest[1])
        hs = HomSpace(a, b)
        return {"status": "pass", "result": {"dim": hs.dim, "basis": [_ints(m) for m in hs.matrices()]}}
    if kind == "ext":
        a, b = ws.module(rest[0]), ws.module(rest[1])
        return {"status": "pass", "result": {"dims": ext_dims(a, b, args.upto).dims}}
    if kind == "membership":
        C, m = ws.subcategory(rest[0]), ws.module(rest[1])
        mem = is_in_add(C, m)
        res = {"member": bool(mem)}
        if mem and mem.section is not None:
            res["section"] = morphism_to_dict(mem.section)
        return {"status": "pass" if mem else "fail", "result": res}
    if kind == "approx":
        C, m = ws.subcategory(rest[0]), ws.module(rest[1])
        if args.side == "right":
            ap = reduced_right_approx(C, m)
            ok, res = ap.epic, {"epic": ap.epic}
        else:
            ap = reduced_left_approx(C, m)
            ok, res = ap.monic, {"monic": ap.monic}
        res["summands"] = [s.name for s in ap.summands]
        res["map"] = morphism_to_dict(ap.map)
        return {"status": "pass" if ok else "fail", "result": res}
    maps = _maps_of(ws, rest[0])
    s = ws.sequence(rest[0])
    if isinstance(s, AugmentedResolution):
        seq = s.sequence()
    elif isinstance(s, CompleteResolution):
        seq = s.window.padded()
    else:
        seq = list(maps) if args.interior else _padded(maps)
    if args.check == "exact":
        v = is_exact(seq)
    else:
        _need(args, "sub")
        C = ws.subcategory(args.sub)
        v = {"hom_from": lambda: is_hom_from_C_exact(C, seq),
             "hom_into": lambda: is_hom_into_C_exact(C, seq),
             "strong_from": lambda: is_strongly_exact(C, seq, "from"),
             "strong_into": lambda: is_strongly_exact(C, seq, "into")}[args.check]()
    res = {"check": args.check, **verdict_to_dict(v)}
    if not v and v.detail:
        res["detail"] = {k: (list(x) if isinstance(x, tuple) else x) for k, x in sorted(v.detail.items())}
    return {"status": "pass" if v else "fail", "result": res}


# ---------------------------------------------------------------- construct


def _flags_ok(res: AugmentedResolution, want) -> bool:
    keys = ["exact", "in_C"]
    if "proper" in want:
        keys.append("proper")
    if "strong" in want:
        keys.append("strongly_proper")
    return all(res.flags[k] != "verified-no" for k in keys)


def _construct_3(ws, args, key, dia):
    _need(args, "sub")
    C = ws.subcategory(args.sub)
    want = tuple(_names(args.want))
    if key in ("3.2", "3.4", "3.6", "3.8"):
        _need(args, "ses", "res0", "res1")
        f, g = _ses(ws, args.ses)
        r0, r1 = _resolution(ws, args.res0), _resolution(ws, args.res1)
        fn = {"3.2": thm_3_2_construct, "3.4": thm_3_4_construct,
              "3.6": thm_3_6_construct, "3.8": thm_3_8_construct}[key]
        con = fn(C, f, g, r0, r1, verify=args.verify, want=want)
        dia.row("ses", [f, g]).row("res0", r0.core_maps()).row("res1", r1.core_maps())
        out = {"resolution": resolution_to_dict(con.resolution), "predicted": dict(con.predicted or {})}
        if con.bridge is not None:
            out["bridge"] = {"maps": [morphism_to_dict(con.bridge.f), morphism_to_dict(con.bridge.g)],
                             **verdict_to_dict(con.bridge.verdict)}
            dia.row("bridge", [con.bridge.f, con.bridge.g])
    else:
        _need(args, "seq", "res")
        maps = ws.sequence(args.seq)
        rs = [_resolution(ws, n) for n in _names(args.res)]
        con = iterate_construct(key, C, maps, rs, verify=args.verify, want=want)
        dia.row("input", maps)
        out = {"resolution": resolution_to_dict(con.resolution),
               "summands": con.resolution.extras.get("summands")}
        if con.aux:
            out["aux"] = [morphism_to_dict(f) for f in con.aux]
    res = con.resolution
    dia.row("output", res.core_maps())
    ok = _flags_ok(res, want) if args.verify else True
    return out, ok


def _construct_4(ws, args, key, dia):
    _need(args, "sub", "window")
    C = ws.subcategory(args.sub)
    w = _window(ws, args.window)
    if key == "4.1":
        if args.contractible:
            inner = contractible_inner(C, w)
        else:
            _need(args, "inner")
            inner = [_window(ws, n) for n in _names(args.inner)]
        cr = thm_4_1_collapse(C, w, inner)
    else:
        _need(args, "idempotent")
        cr = thm_4_6_summand(C, w, ws.morphism(args.idempotent))
    if args.verify:
        cr = verify_complete_resolution(C, cr.window, cr.pivot)
    dia.row("input", w.window.maps).row("output", cr.window.maps)
    out = {"window": window_to_dict(cr)}
    if "pattern" in cr.extras:
        out["pattern"] = cr.extras["pattern"]
    return out, cr.ok


def _seq_dict(maps):
    return {"dims": [maps[0].source.dim] + [f.target.dim for f in maps],
            "maps": [morphism_to_dict(f) for f in maps]}


def _construct_5(ws, args, key, dia):
    if key == "5.12":
        _need(args, "sub", "module")
        X = ws.subcategory(args.sub)
        m = ws.module(args.module)
        rep = gdim_report(X, m, args.bound, depth=args.depth)
        g_objs = [ws.module(n) for n in _names(args.g_objects)] or [
            v for _, v in sorted(ws.modules.items())
            if v.algebra.same_as(m.algebra) and g_membership(X, v, args.depth).verified]
        gp = cor_5_12_sequences(X, m, rep, g_objs, depth=args.depth, bound=args.bound)
        dia.row("precover", [gp.approx_ses.f, gp.approx_ses.g]).row("embedding", [gp.embed_ses.f, gp.embed_ses.g])
        out = {"n": gp.n, "approx_ses": _seq_dict([gp.approx_ses.f, gp.approx_ses.g]),
               "embed_ses": _seq_dict([gp.embed_ses.f, gp.embed_ses.g]),
               "ext1_checks": {k: v for k, v in sorted(gp.ext_checks.items())},
               "precover": gp.precover}
        return out, gp.precover
    pair = _pair(ws, args)
    if key == "5.5":
        _need(args, "module")
        w = thm_5_5_witness(pair, ws.module(args.module), args.n, args.t)
        dia.row("witness", w.maps)
        return {"witness": _seq_dict(w.maps), "exact": verdict_to_dict(w.exact),
                "memberships": dict(sorted(w.memberships.items()))}, w.ok
    _need(args, "seq")
    maps = ws.sequence(args.seq)
    dia.row("input", maps)
    if key == "5.1":
        r = prop_5_1_rebuild(pair, maps, args.side)
        dia.row("output", r.maps)
        return {"sequence": _seq_dict(r.maps), "exact": verdict_to_dict(r.exact),
                "memberships": dict(sorted(r.memberships.items()))}, r.ok
    s = thm_5_3_swap(pair, maps, args.side)
    dia.row("output", s.sequence).row("connecting", [s.connecting.f, s.connecting.g])
    return {"sequence": _seq_dict(s.sequence), "exact": verdict_to_dict(s.exact),
            "connecting": _seq_dict([s.connecting.f, s.connecting.g]),
            "memberships": dict(sorted(s.memberships.items()))}, s.ok


def cmd_construct(args) -> dict:
    key = CONSTRUCTIONS.get(args.theorem, args.theorem)
    if key not in KEYS:
        raise WorkspaceError(f"unknown construction {args.theorem!r}")
    ws = _workspace(args)
    dia = Diagram(f"construct_{key.replace('.', '_')}")
    try:
        if key.startswith("3."):
            out, ok = _construct_3(ws, args, key, dia)
        elif key.startswith("4."):
            out, ok = _construct_4(ws, args, key, dia)
        else:
            out, ok = _construct_5(ws, args, key, dia)
    except HypothesisViolation as exc:
        raise Failure(f"hypothesis violated: {exc.certificate}" + (f" ({exc.detail})" if exc.detail else "")
                      + (f" at step {exc.step}" if exc.step is not None else "")) from exc
    except (Obstruction, MissingWitness) as exc:
        raise Failure(str(exc)) from exc
    except ValueError as exc:
        raise WorkspaceError(str(exc)) from exc
    if args.dot:
        Path(args.dot).write_text(dia.render(), encoding="utf-8")
    return {"construction": key, "verified": bool(args.verify), "status": "pass" if ok else "fail", "output": out}


# ---------------------------------------------------------------- report


REPORTS = {
    "c-dim": lambda X, m, b, d: c_dim_report(X, m, b),
    "codim": lambda X, m, b, d: codim_report(X, m, b),
    "gdim": lambda X, m, b, d: gdim_report(X, m, b, depth=d),
    "gcodim": lambda X, m, b, d: g_codim_report(X, m, b, depth=d),
}


def cmd_report(args) -> dict:
    ws = _workspace(args)
    m = ws.module(args.module)
    X = ws.subcategory(args.subcategory)
    kinds = list(REPORTS) if args.kind == "all" else [args.kind]
    reps: list[DimensionReport] = [REPORTS[k](X, m, args.bound, args.depth) for k in kinds]
    ok = all(r.agree for r in reps)
    return {"status": "pass" if ok else "fail", "reports": [r.as_dict() for r in reps],
            "text": "\n".join(r.render() for r in reps)}


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workspace", default=argparse.SUPPRESS, help="workspace JSON (default: bundled fixtures)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="also write the JSON report here")
    common.add_argument("--dot", default=argparse.SUPPRESS, help="write a DOT diagram (construct)")
    common.add_argument("--expect", choices=["pass", "fail"], default=argparse.SUPPRESS)
    parser = argparse.ArgumentParser(prog="homres", parents=[common],
                                     description="Resolutions and dimensions for modules over GF(p)-algebras.")
    parser.set_defaults(workspace=None, out=None, dot=None, expect=None)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", parents=[common], help="validate workspace files or directories")
    v.add_argument("paths", nargs="*")

    c = sub.add_parser("compute", parents=[common], help="hom, ext, approx, exactness or membership")
    c.add_argument("kind", choices=["hom", "ext", "approx", "exactness", "membership"])
    c.add_argument("names", nargs="*")
    c.add_argument("--upto", type=int, default=3)
    c.add_argument("--side", choices=["right", "left"], default="right")
    c.add_argument("--sub")
    c.add_argument("--check", choices=["exact", "hom_from", "hom_into", "strong_from", "strong_into"],
                   default="exact")
    c.add_argument("--interior", action="store_true", help="do not add zero objects at the ends")

    k = sub.add_parser("construct", parents=[common], help="run a construction")
    k.add_argument("theorem", help=f"one of {', '.join(KEYS)} or {', '.join(sorted(CONSTRUCTIONS))}")
    k.add_argument("--sub")
    k.add_argument("--ses")
    k.add_argument("--res0")
    k.add_argument("--res1")
    k.add_argument("--seq")
    k.add_argument("--res", help="comma-separated (co)resolutions")
    k.add_argument("--want", help="comma-separated: proper, strong")
    k.add_argument("--window")
    k.add_argument("--inner", help="comma-separated inner windows")
    k.add_argument("--contractible", action="store_true")
    k.add_argument("--idempotent")
    k.add_argument("--gen")
    k.add_argument("--cogen")
    k.add_argument("--gorenstein", action="store_true", help="use G(--sub) as the ambient class")
    k.add_argument("--side", choices=["gen", "cogen"], default="cogen")
    k.add_argument("--module")
    k.add_argument("--n", type=int, default=1)
    k.add_argument("--t", type=int, default=0)
    k.add_argument("--bound", type=int, default=4)
    k.add_argument("--depth", type=int, default=3)
    k.add_argument("--g-objects", dest="g_objects")
    k.add_argument("--verify", action="store_true")

    r = sub.add_parser("report", parents=[common], help="dimension bounds of a module")
    r.add_argument("module")
    r.add_argument("subcategory")
    r.add_argument("--bound", type=int, default=5)
    r.add_argument("--kind", choices=list(REPORTS) + ["all"], default="c-dim")
    r.add_argument("--depth", type=int, default=3)
    r.add_argument("--json", action="store_true")
    return parser


def _emit(report: dict, args, text: str | None = None):
    out = dump_json(report)
    if args.out:
        Path(args.out).write_text(out, encoding="utf-8")
    sys.stdout.write(text + "\n" if text is not None else out)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = {"validate": cmd_validate, "compute": cmd_compute, "construct": cmd_construct,
               "report": cmd_report}[args.command]
    try:
        report = handler(args)
    except _Malformed as exc:
        _emit({"command": args.command, "status": "malformed", **exc.report}, args)
        return 2
    except WorkspaceError as exc:
        _emit({"command": args.command, "status": "error", "error": str(exc)}, args)
        return 2
    except Failure as exc:
        report = {"command": args.command, "status": "fail", "error": str(exc)}
        _emit(report, args)
        return 0 if args.expect == "fail" else 1
    report = {"command": args.command, **report}
    text = report.get("text") if args.command == "report" and not args.json else None
    _emit(report, args, text)
    status = report.get("status", "pass")
    if args.command == "compute" and args.expect is None:
        return 0
    return 0 if status == (args.expect or "pass") else 1


if __name__ == "__main__":
    sys.exit(main())
