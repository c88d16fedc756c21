"""Command-line front end.

    liftlab list
    liftlab show g8[r=5,alpha=2]
    liftlab verify g6.a
    liftlab verify-all [--grid r_max=5,freqs=0;1] [--only g6,g6.a]
    liftlab cohomology g16 [--degree D --freq F]
    liftlab solve g6 --cap affine [--against g6.a]

``--json`` prints one JSON document (sorted keys).  Exit status: 0 when
everything checked out, 1 on a verification failure, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
import time
from typing import List, Optional

from . import __version__, catalog
from ._kernels import BACKEND
from .cohomology import compute_h1, default_space
from .errors import LiftLabError, NotClosed, ParseError, UnknownId, InvalidParameter
from .liealg import classify_lift_type, structure_constants, transitive_at
from .liftsolver import CAPS, align_to_base, ansatz_witness, metric_witness, solve_lifts
from .vfield import project


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _base_parser() -> argparse.ArgumentParser:
    def flags(default):
        common = _Parser(add_help=False)
        common.add_argument("--json", action="store_true", default=default, help="emit a JSON report")
        common.add_argument(
            "--timings", action="store_true", default=default, help="include wall-clock timings (not reproducible)"
        )
        return common

    # subcommands must not reset flags given before the subcommand name
    common = flags(argparse.SUPPRESS)
    p = _Parser(prog="liftlab", description="Transitive Lie algebras on the plane and their lifts.", parents=[flags(False)])
    p.add_argument("--version", action="version", version=f"liftlab {__version__} ({BACKEND} kernel)")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    sub.add_parser("list", parents=[common], help="catalog ids and parameter schemas")
    s = sub.add_parser("show", parents=[common], help="generators of an instance")
    s.add_argument("instance")
    s = sub.add_parser("verify", parents=[common], help="verify one instance")
    s.add_argument("instance")
    s = sub.add_parser("verify-all", parents=[common], help="verify every instance of a grid")
    s.add_argument("--grid", default=None, help="grid override, e.g. r_max=5,r_span=1")
    s.add_argument("--only", default=None, help="comma-separated ids")
    s = sub.add_parser("cohomology", parents=[common], help="H^1 on a truncated window")
    s.add_argument("instance")
    s.add_argument("--degree", type=int, default=None)
    s.add_argument("--freq", type=int, default=None)
    s = sub.add_parser("solve", parents=[common], help="re-derive the lifts of a base algebra")
    s.add_argument("instance")
    s.add_argument("--cap", required=True, choices=CAPS)
    s.add_argument("--degree", type=int, default=None)
    s.add_argument("--freq", type=int, default=None)
    s.add_argument("--against", default=None, help="catalog lift to compare with")
    return p


def _params_text(params: dict) -> dict:
    return {k: catalog._fmt_value(v) for k, v in sorted(params.items())}


def _instance(text: str):
    try:
        eid, params = catalog.parse_instance(text)
        gens = catalog.instantiate(eid, params)
    except (ParseError, UnknownId, InvalidParameter) as exc:
        raise UsageError(str(exc)) from exc
    return eid, params, gens


# -- commands ----------------------------------------------------------------------


def cmd_list(args) -> dict:
    entries = []
    for eid in catalog.ids():
        e = catalog.get_entry(eid)
        entries.append(
            {
                "id": eid,
                "base": e.base_id,
                "type": e.lift_type,
                "params": dict(e.params),
                "formula": e.formula,
                "transitive": e.transitive,
            }
        )
    return {"ok": True, "entries": entries}


def cmd_show(args) -> dict:
    eid, params, gens = _instance(args.instance)
    return {
        "ok": True,
        "id": eid,
        "instance": catalog.format_instance(eid, params),
        "params": _params_text(params),
        "generators": [str(X) for X in gens],
        "constants": catalog.free_constants(eid, params),
    }


def verify_instance(eid: str, params: dict) -> dict:
    """Closure, transitivity and, for lifts, projection and type checks."""
    entry = catalog.get_entry(eid)
    out = {
        "id": eid,
        "instance": catalog.format_instance(eid, params),
        "params": _params_text(params),
        "checks": {},
        "ok": False,
    }
    checks = out["checks"]
    try:
        gens = catalog.instantiate(eid, params)
        alg = structure_constants(gens, entry.sample_point)
        checks["closure"] = True
        checks["dimension"] = alg.dim
        if not entry.is_lift:
            if entry.transitive:
                checks["transitive"] = transitive_at(alg, entry.sample_point)
                if not checks["transitive"]:
                    out["error"] = f"not transitive at {entry.sample_point}"
                    return out
            out["ok"] = True
            return out
        base = structure_constants(catalog.instantiate(entry.base_id, catalog.base_params(eid, params)), entry.sample_point)
        aligned = structure_constants(align_to_base(base, gens), entry.sample_point)
        checks["projection"] = True
        same = aligned.structure == base.structure
        checks["base_structure_constants"] = same
        if not same:
            bad = next(k for k in base.structure if aligned.structure[k] != base.structure[k])
            out["error"] = f"bracket of generators {bad[0] + 1} and {bad[1] + 1} differs from the base"
            return out
        tag = classify_lift_type(aligned, base, entry.sample_point)
        checks["kernel"] = True
        checks["type"] = tag.kind
        checks["normal_form"] = tag.normal_form
        if tag.kind != entry.lift_type:
            out["error"] = f"classified as {tag.kind}, catalog says {entry.lift_type}"
            return out
        if not tag.normal_form:
            out["error"] = "fiber action is not in normal form"
            return out
        out["ok"] = True
    except NotClosed as exc:
        out["error"] = str(exc)
        if exc.bracket is not None:
            out["bracket"] = str(exc.bracket)
    except LiftLabError as exc:
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out


def cmd_verify(args) -> dict:
    eid, params, _ = _instance(args.instance)
    return verify_instance(eid, params)


def cmd_verify_all(args) -> dict:
    try:
        grid = catalog.parse_grid(args.grid) if args.grid else catalog.default_grid()
        only = [s.strip() for s in args.only.split(",")] if args.only else None
        if only:
            for eid in only:
                catalog.get_entry(eid)
    except (ParseError, UnknownId, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    results = [verify_instance(eid, p) for eid, p in catalog.enumerate_instances(grid, only)]
    failed = [r for r in results if not r["ok"]]
    return {"ok": not failed, "count": len(results), "failures": len(failed), "results": results}


def _base_only(eid: str):
    if catalog.get_entry(eid).is_lift:
        raise UsageError(f"{eid} is a lift; give a base algebra")


def _space(alg, args):
    return default_space(alg, args.degree, args.freq)


def cmd_cohomology(args) -> dict:
    eid, params, gens = _instance(args.instance)
    _base_only(eid)
    alg = structure_constants(gens)
    try:
        space = _space(alg, args)
    except LiftLabError as exc:
        raise UsageError(str(exc)) from exc
    res = compute_h1(alg, space)
    return {
        "ok": True,
        "id": eid,
        "instance": catalog.format_instance(eid, params),
        "params": _params_text(params),
        **res.report(),
    }


def cmd_solve(args) -> dict:
    eid, params, gens = _instance(args.instance)
    _base_only(eid)
    base = structure_constants(gens, catalog.get_entry(eid).sample_point)
    try:
        space = _space(base, args) if (args.degree or args.freq) else None
    except LiftLabError as exc:
        raise UsageError(str(exc)) from exc
    out = {"id": eid, "instance": catalog.format_instance(eid, params), "params": _params_text(params), "cap": args.cap}
    t0 = time.perf_counter()
    try:
        res = solve_lifts(base, args.cap, space)
    except LiftLabError as exc:
        out.update(ok=False, error=f"{type(exc).__name__}: {exc}")
        basis = getattr(exc, "basis", None)
        if basis:
            out["basis"] = basis
        return out
    out.update(res.report())
    out["ok"] = True
    out["_timings"] = dict(res.timings, wall=time.perf_counter() - t0)
    if args.against:
        out["equivalence"] = _compare(args.against, eid, params, res)
        out["ok"] = out["equivalence"]["verified"]
    return out


def _compare(text: str, eid: str, params: dict, res) -> dict:
    lid, lparams, lgens = _instance(text)
    entry = catalog.get_entry(lid)
    if entry.base_id != eid or entry.lift_type != res.cap:
        raise UsageError(f"{lid} is not a {res.cap} lift of {eid}")
    if catalog.base_params(lid, lparams) != catalog.base_params(eid, params):
        lparams = dict(params, **lparams)
        lgens = catalog.instantiate(lid, lparams)
    consts = catalog.free_constants(lid, lparams)
    if res.cap == "metric":
        if not res.branches:
            return {"lift": lid, "verified": False, "reason": "no metric family"}
        w = metric_witness(res.base, lgens, consts, res)
    else:
        w = ansatz_witness(res, lgens, consts)
    if w is None:
        return {"lift": lid, "verified": False, "reason": "no branch matched"}
    return {"lift": lid, **w.report()}


_COMMANDS = {
    "list": cmd_list,
    "show": cmd_show,
    "verify": cmd_verify,
    "verify-all": cmd_verify_all,
    "cohomology": cmd_cohomology,
    "solve": cmd_solve,
}


# -- output ------------------------------------------------------------------------


def _strip_timings(obj):
    if isinstance(obj, dict):
        return {k: _strip_timings(v) for k, v in obj.items() if k != "_timings"}
    if isinstance(obj, list):
        return [_strip_timings(v) for v in obj]
    return obj


def _text(command: str, rep: dict) -> List[str]:
    lines: List[str] = []
    if command == "list":
        for e in rep["entries"]:
            schema = ", ".join(f"{k}:{v}" for k, v in e["params"].items())
            kind = f"{e['type']} lift of {e['base']}" if e["base"] else "base"
            lines.append(f"{e['id']:<8} {kind:<22} [{schema}]")
    elif command == "show":
        lines.append(rep["instance"])
        lines += [f"  {g}" for g in rep["generators"]]
        if rep["constants"]:
            lines.append("  constants: " + ", ".join(rep["constants"]))
    elif command == "verify":
        lines.append(_verify_line(rep))
    elif command == "verify-all":
        lines += [_verify_line(r) for r in rep["results"]]
        lines.append(f"{rep['count'] - rep['failures']}/{rep['count']} ok")
    elif command == "cohomology":
        lines.append(f"{rep['instance']}: dim H1 = {rep['dim_H1']} at truncation (D={rep['D']}, F={rep['F']})")
        lines.append(f"  dim Z1 = {rep['dim_Z1']}, dim B1 = {rep['dim_B1']}")
        for k, rep_ in enumerate(rep["representatives"], 1):
            lines.append(f"  psi{k} = ({', '.join(rep_)})")
    elif command == "solve":
        if not rep["ok"] and "error" in rep:
            lines.append(f"{rep['instance']} --cap {rep['cap']}: FAIL {rep['error']}")
            lines += [f"  {g}" for g in rep.get("basis", [])]
            return lines
        tr = rep["truncation"]
        lines.append(f"{rep['instance']} --cap {rep['cap']}: {len(rep['branches'])} branch(es) (D={tr['D']}, F={tr['F']})")
        lines += [f"  note: {n}" for n in rep["notes"]]
        for k, br in enumerate(rep["branches"], 1):
            assign = ", ".join(f"{a}={v}" for a, v in br["assignment"].items())
            free = ", ".join(br["free"])
            lines.append(f"  branch {k}: {br['type']}" + (f"  [{assign}]" if assign else "") + (f"  free: {free}" if free else ""))
            lines += [f"    {g}" for g in br["generators"]]
        eq = rep.get("equivalence")
        if eq:
            status = "verified" if eq["verified"] else "NOT verified"
            lines.append(f"  equivalence with {eq['lift']}: {status}")
            for m in eq.get("maps", []):
                lines.append(f"    {m}")
            for k, v in eq.get("symbols", {}).items():
                lines.append(f"    {k} = {v}")
    return lines


def _verify_line(r: dict) -> str:
    name = r["instance"]
    if r["ok"]:
        detail = f"type={r['checks']['type']}" if "type" in r["checks"] else f"dim={r['checks']['dimension']}"
        return f"ok   {name}: {detail}"
    line = f"FAIL {name}: {r.get('error', '')}"
    if "bracket" in r:
        line += f" (bracket {r['bracket']})"
    return line


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _base_parser()
    try:
        with contextlib.redirect_stdout(stdout):  # --help / --version text
            args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("missing command")
        rep = _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"liftlab: error: {exc}", file=stderr)
        print(parser.format_usage().rstrip(), file=stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    timings = rep.get("_timings")
    rep = _strip_timings(rep)
    if args.timings and timings is not None:
        rep["timings"] = timings
    if args.json:
        doc = {"command": argv, "version": __version__, **rep}
        print(json.dumps(doc, indent=2, sort_keys=True), file=stdout)
    else:
        for line in _text(args.command, rep):
            print(line, file=stdout)
        if args.timings and timings:
            print("timings: " + ", ".join(f"{k}={v:.3f}s" for k, v in sorted(timings.items())), file=stdout)
    return 0 if rep.get("ok", True) else 1


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
