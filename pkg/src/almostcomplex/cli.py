"""Command-line front end.

Targets are catalog names (``almostcomplex zoo list``), manifold JSON files in
the catalog schema, or text files holding a presentation such as
``(0^3,12,14,24)``.  Exit status: 0 success, 1 mathematical error (for example
a form that should be closed is not), 2 configuration or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cohomology import NotClosedError, betti_numbers, cup_map, hlc_check, stage_report
from .complexstruct import (AlmostComplexStructure, NotSpanningError, acs_from_coframe, is_integrable)
from .deform import (DegenerateCurveError, EndomorphismCurve, named_direction, obstruction,
                     semicontinuity_scan)
from .exterior import Form, divided_power, format_form, parse_form
from .hermitian import form_predicates, positivity_on_complex_hyperplanes
from .lie import JacobiError, PresentationSyntaxError
from .scalars import GaussQ, TSeries, format_scalar, mpq, parse_scalar
from .zoo import (UnknownEntryError, ZooEntry, entry_from_json, verify_entry, zoo_catalog, zoo_lookup)


class ConfigError(Exception):
    """Bad command-line input; maps to exit status 2."""


def jsonable(x):
    """Exact, JSON-safe rendering: non-integer rationals become ``"p/q"`` strings."""
    if isinstance(x, bool) or x is None or isinstance(x, (str, int)):
        return x
    if isinstance(x, (GaussQ, TSeries)):
        return format_scalar(x)
    if type(x) is type(mpq(0)):
        return int(x) if x.denominator == 1 else format_scalar(x)
    if isinstance(x, Form):
        return format_form(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


# --- resolving inputs ----------------------------------------------------------------------


def load_target(target: str, complex_mode: bool = False) -> ZooEntry:
    path = Path(target)
    if path.suffix == ".json" or (path.exists() and path.is_file()):
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read {target}: {exc}")
        if path.suffix == ".json":
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{target}: invalid JSON: {exc}")
            data.setdefault("name", path.stem)
        else:
            data = {"name": path.stem, "presentation": text.strip(),
                    "mode": "complex" if complex_mode else "real"}
        try:
            return entry_from_json(data)
        except (PresentationSyntaxError, JacobiError) as exc:
            raise ConfigError(f"{target}: {exc}")
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{target}: {exc}")
    try:
        return zoo_lookup(target)
    except UnknownEntryError as exc:
        raise ConfigError(str(exc))


def resolve_structure(entry: ZooEntry, args) -> tuple[str, AlmostComplexStructure]:
    N = entry.presentation.dim
    try:
        if getattr(args, "matrix", None):
            rows = json.loads(args.matrix)
            return "matrix", AlmostComplexStructure([[parse_scalar(str(v)) for v in r] for r in rows])
        if getattr(args, "coframe", None):
            forms = [parse_form(s, N) for s in json.loads(args.coframe)]
            return "coframe", acs_from_coframe(N, forms)
        name = getattr(args, "structure", None)
        if name is None:
            if not entry.structures:
                raise ConfigError(f"{entry.name} has no structure; pass --structure, --matrix or --coframe")
            name = next(iter(entry.structures))
        if name not in entry.structures:
            raise ConfigError(f"{entry.name} has no structure {name!r}; known: {', '.join(entry.structures)}")
        return name, entry.structures[name]
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid structure: {exc}")


def resolve_form(entry: ZooEntry, text: str) -> Form:
    if text in entry.forms:
        return entry.forms[text]
    try:
        return parse_form(text, entry.presentation.dim)
    except ValueError as exc:
        raise ConfigError(f"{text!r} is neither a named form of {entry.name} nor a form: {exc}")


def _samples(text: str) -> list:
    try:
        return [parse_scalar(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(str(exc))


# --- report assembly -------------------------------------------------------------------------


def empty_report(entry: ZooEntry | None) -> dict:
    return {
        "manifold": entry.name if entry else None,
        "validity": entry.validity if entry else None,
        "betti": betti_numbers(entry.presentation) if entry else None,
        "structures": [],
        "predicates": [],
        "cup_maps": [],
        "scan": [],
        "obstruction": [],
        "errors": [],
    }


def structure_record(entry: ZooEntry, name: str, J, stages, currents: bool) -> dict:
    p = entry.presentation
    rec = {"name": name, "integrable": is_integrable(p, J), "stages": []}
    for k in stages:
        rec["stages"].append(stage_report(p, J, k).as_dict())
        if currents:
            rec["stages"].append(stage_report(p, J, k, currents=True).as_dict())
    return rec


def cmd_analyze(entry: ZooEntry, args, report: dict):
    N = entry.presentation.dim
    stages = args.stage or [2]
    for k in stages:
        if not 0 <= k <= N:
            raise ConfigError(f"stage {k} outside 0..{N}")
    if args.all_structures:
        targets = list(entry.structures.items())
    else:
        targets = [resolve_structure(entry, args)]
    for name, J in targets:
        report["structures"].append(structure_record(entry, name, J, stages, args.currents))


def cmd_predicates(entry: ZooEntry, args, report: dict):
    name, J = resolve_structure(entry, args)
    omega = resolve_form(entry, args.form)
    rec = {"form": args.form, "structure": name}
    rec.update(form_predicates(entry.presentation, J, omega).as_dict())
    if args.positivity:
        n = entry.presentation.dim // 2
        v = positivity_on_complex_hyperplanes(entry.presentation, J, divided_power(omega, n - 1),
                                              trials=args.trials, seed=args.seed, root=omega)
        rec["positivity"] = v.as_dict()
    report["predicates"].append(rec)


def cmd_cup(entry: ZooEntry, args, report: dict):
    omega = resolve_form(entry, args.form)
    p = entry.presentation
    if args.hlc:
        for k, m in sorted(hlc_check(p, omega).items()):
            report["cup_maps"].append({"form": args.form, "power": k, **m.as_dict()})
        return
    gamma = divided_power(omega, args.power)
    report["cup_maps"].append({"form": args.form, "power": args.power, **cup_map(p, gamma, args.degree).as_dict()})


def cmd_scan(entry: ZooEntry, args, report: dict):
    if args.direction:
        _, J = resolve_structure(entry, args)
        try:
            curve = EndomorphismCurve(J, named_direction(args.direction, J.n))
        except ValueError as exc:
            raise ConfigError(str(exc))
    else:
        try:
            curve = entry.curve(args.curve)
        except KeyError as exc:
            raise ConfigError(str(exc.args[0]))
    rows = semicontinuity_scan(entry.presentation, curve, _samples(args.samples))
    report["scan"].extend(r.as_dict() for r in rows)
    for r in rows:
        if r.error:
            report["errors"].append({"kind": "degenerate", "message": f"t = {format_scalar(r.t)}: {r.error}"})


def cmd_obstruction(entry: ZooEntry, args, report: dict):
    name, J = resolve_structure(entry, args)
    alpha = resolve_form(entry, args.alpha)
    try:
        L = named_direction(args.direction, J.n)
    except ValueError as exc:
        raise ConfigError(str(exc))
    if args.order < 1 or args.order > args.truncation:
        raise ConfigError(f"--order must be between 1 and the truncation {args.truncation}")
    r = obstruction(entry.presentation, J, alpha, L, args.order, args.mode, K=args.truncation)
    rec = {"structure": name, "alpha": args.alpha, "direction": args.direction}
    rec.update(r.as_dict())
    report["obstruction"].append(rec)


# --- text rendering ---------------------------------------------------------------------------


def render_text(report: dict) -> str:
    lines = []
    if report.get("manifold") is not None:
        lines.append(f"manifold: {report['manifold']}  (validity: {report['validity']})")
        lines.append("betti: " + " ".join(str(b) for b in report["betti"]))
    for s in report["structures"]:
        lines.append(f"structure {s['name']}: integrable={s['integrable']}")
        for st in s["stages"]:
            extra = ""
            if "h_plus" in st:
                extra = f" h+={st['h_plus']} h-={st['h_minus']} meet={st['plus_minus_intersection']}"
            lines.append(
                f"  stage {st['degree']} [{st['kind']}] b={st['betti']} pure={st['pure']} full={st['full']}"
                f" complex_pure={st['complex_pure']} complex_full={st['complex_full']}{extra}"
            )
            for label, dim in st["real_dims"].items():
                lines.append(f"    {label}: {dim}")
    for pr in report["predicates"]:
        flags = " ".join(f"{k}={pr[k]}" for k in ("nondegenerate", "taming", "compatible", "almost_kahler",
                                                  "semi_kahler", "balanced", "hlc"))
        lines.append(f"predicates {pr['form']} / {pr['structure']}: {flags}")
        lines.append(f"  d omega = {pr['d_omega']}")
        if "positivity" in pr:
            lines.append(f"  positivity: {pr['positivity']['status']} ({pr['positivity']['trials']} trials)")
    for c in report["cup_maps"]:
        lines.append(f"cup {c['form']}^[{c['power']}]: H^{c['source_degree']} -> H^{c['target_degree']}"
                     f" rank={c['rank']} iso={c['iso']}")
    for r in report["scan"]:
        if r["error"]:
            lines.append(f"t={r['t']}: error: {r['error']}")
        else:
            lines.append(f"t={r['t']}: h+={r['h_plus']} h-={r['h_minus']} pure={r['pure']} full={r['full']}"
                         f" meet={r['intersection']}")
    for o in report["obstruction"]:
        lines.append(f"obstruction [{o['mode']}] order {o['order']}: solvable={o['solvable']}")
        for st in o["steps"]:
            what = f"witness {st['witness']}" if st["solvable"] else f"certificate {st['certificate']}"
            lines.append(f"  order {st['order']}: target {st['target']}; {what}")
        if o["closed_through"] is not None:
            lines.append(f"  d eta_t vanishes through t^{o['closed_through']}")
    for e in report["errors"]:
        lines.append(f"error ({e['kind']}): {e['message']}")
    return "\n".join(lines)


# --- zoo subcommands ------------------------------------------------------------------------------


def cmd_zoo(args) -> tuple[dict, int]:
    if args.zoo_cmd == "list":
        return {"entries": [{"name": z.name, "title": z.title, "validity": z.validity} for z in zoo_catalog()]}, 0
    if args.zoo_cmd == "show":
        try:
            return {"entry": zoo_lookup(args.name).to_json()}, 0
        except UnknownEntryError as exc:
            raise ConfigError(str(exc))
    names = args.names or [z.name for z in zoo_catalog()]
    try:
        entries = [zoo_lookup(n) for n in names]
    except UnknownEntryError as exc:
        raise ConfigError(str(exc))
    results = [r for z in entries for r in verify_entry(z)]
    ok = all(r.passed for r in results)
    return {"expectations": [r.as_dict() for r in results], "passed": ok}, 0 if ok else 1


def render_zoo(args, data: dict) -> str:
    if "entries" in data:
        return "\n".join(f"{e['name']:10s} {e['validity']:20s} {e['title']}" for e in data["entries"])
    if "entry" in data:
        return json.dumps(data["entry"], indent=2)
    lines = []
    for r in data["expectations"]:
        mark = "PASS" if r["passed"] else "FAIL"
        got = r["error"] if r["error"] else json.dumps(jsonable(r["actual"]))
        lines.append(f"{mark} {r['entry']} {r['quantity']} {json.dumps(r['args'], sort_keys=True)}"
                     f" expected={json.dumps(r['expected'])} got={got}  # {r['note']}")
    lines.append("all expectations pass" if data["passed"] else "some expectations FAILED")
    return "\n".join(lines)


# --- argument parsing ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="almostcomplex", description="Exact invariant cohomology of almost-complex Lie algebras.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for random sampling")

    target = argparse.ArgumentParser(add_help=False, parents=[common])
    target.add_argument("target", help="catalog name, manifold .json file, or presentation text file")
    target.add_argument("--complex", action="store_true", help="read a presentation file in complex mode")
    target.add_argument("--structure", help="named structure of the target")
    target.add_argument("--matrix", help="structure as a JSON matrix of scalars (rows act on 1-forms)")
    target.add_argument("--coframe", help='structure as a JSON list of (1,0)-forms, e.g. ["e1+i*e2", ...]')

    sub = ap.add_subparsers(dest="cmd", required=True)

    z = sub.add_parser("zoo", help="catalog operations")
    zs = z.add_subparsers(dest="zoo_cmd", required=True)
    zs.add_parser("list", parents=[common])
    s = zs.add_parser("show", parents=[common])
    s.add_argument("name")
    v = zs.add_parser("verify", parents=[common])
    v.add_argument("names", nargs="*")

    a = sub.add_parser("analyze", parents=[target], help="Betti numbers and pure/full verdicts")
    a.add_argument("--stage", type=int, action="append", help="stage to examine (repeatable; default 2)")
    a.add_argument("--currents", action="store_true", help="also report the current-side verdicts")
    a.add_argument("--all-structures", action="store_true", help="every named structure of the target")

    pr = sub.add_parser("predicates", parents=[target], help="taming/compatible/semi-Kahler/... flags")
    pr.add_argument("--form", required=True, help="named form or form text")
    pr.add_argument("--positivity", action="store_true", help="test form^[n-1] on complex hyperplanes")
    pr.add_argument("--trials", type=int, default=50)

    c = sub.add_parser("cup", parents=[target], help="cup-product maps")
    c.add_argument("--form", required=True)
    c.add_argument("--power", type=int, default=1, help="divided power of the form")
    c.add_argument("--degree", type=int, default=1, help="source degree")
    c.add_argument("--hlc", action="store_true", help="all Lefschetz maps omega^[k]: H^(n-k) -> H^(n+k)")

    sc = sub.add_parser("scan", parents=[target], help="h+/h- along a curve")
    sc.add_argument("--curve", help="named curve of the target")
    sc.add_argument("--direction", help="endomorphism curve direction such as b13")
    sc.add_argument("--samples", required=True, help="comma-separated parameters, e.g. 0,1/2,i/4")

    o = sub.add_parser("obstruction", parents=[target], help="order-by-order closedness obstruction")
    o.add_argument("--alpha", required=True)
    o.add_argument("--direction", required=True)
    o.add_argument("--mode", choices=["paper-literal", "projected"], default="projected")
    o.add_argument("--order", type=int, default=1)
    o.add_argument("--truncation", type=int, default=2, help="series truncation order K")
    return ap


_COMMANDS = {
    "analyze": cmd_analyze,
    "predicates": cmd_predicates,
    "cup": cmd_cup,
    "scan": cmd_scan,
    "obstruction": cmd_obstruction,
}


def _emit(data: dict, as_json: bool, text: str | None = None):
    if as_json:
        sys.stdout.write(json.dumps(jsonable(data), indent=2) + "\n")
    elif text:
        sys.stdout.write(text + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    as_json = getattr(args, "json", False)

    if args.cmd == "zoo":
        try:
            data, code = cmd_zoo(args)
        except ConfigError as exc:
            return _fail(as_json, "config", str(exc), 2)
        _emit(data, as_json, render_zoo(args, data))
        return code

    try:
        entry = load_target(args.target, args.complex)
    except ConfigError as exc:
        return _fail(as_json, "config", str(exc), 2)
    report = empty_report(entry)
    try:
        _COMMANDS[args.cmd](entry, args, report)
    except ConfigError as exc:
        return _fail(as_json, "config", str(exc), 2)
    except NotClosedError as exc:
        return _fail(as_json, "math", f"form is not closed: d = {format_form(exc.differential)}", 1)
    except (DegenerateCurveError, NotSpanningError) as exc:
        return _fail(as_json, "math", str(exc), 1)
    except ValueError as exc:
        return _fail(as_json, "math", str(exc), 1)
    _emit(report, as_json, render_text(report))
    return 1 if report["errors"] else 0


def _fail(as_json: bool, kind: str, message: str, code: int) -> int:
    if as_json:
        sys.stdout.write(json.dumps({"errors": [{"kind": kind, "message": message}]}, indent=2) + "\n")
    else:
        sys.stderr.write(f"error: {message}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
