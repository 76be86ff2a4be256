"""Command line front end.

Every subcommand prints one JSON document on stdout (``--pretty`` for
indentation).  Exit codes: 0 success, 2 unparseable input, 3 inadmissible
or exceptional signature, 4 a verification check failed.
"""

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import config as cfgmod
from . import draw, smoothing, traintrack, twist
from .blocks import BLOCK_NAMES, building_block, list_assets, load_asset
from .errors import (CollapseObstruction, EulerViolation, ExceptionalSignature,
                     MalformedConfiguration, MalformedTrack, OddParity, ParityViolation,
                     RankDeficient, SignatureParseError, StrataError, UnknownBlock)
from .signature import (Signature, euler_residual, format_signature, is_admissible,
                        is_exceptional, optimal_count, parse_prongs)

EXIT_OK, EXIT_PARSE, EXIT_INADMISSIBLE, EXIT_VERIFY = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _plain(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, Signature):
        return format_signature(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, Path):
        return str(x)
    if hasattr(x, "__float__") and not isinstance(x, (int, float, bool)):
        return float(x)
    return x


def emit(obj, pretty=False, stream=None):
    stream = stream or sys.stdout
    json.dump(_plain(obj), stream, indent=2 if pretty else None, sort_keys=True)
    stream.write("\n")


def _signature(args):
    try:
        prongs = parse_prongs(args.regions)
    except SignatureParseError as exc:
        raise CliError(EXIT_PARSE, str(exc))
    if args.sign not in ("+", "-"):
        raise CliError(EXIT_PARSE, f"sign must be + or -, got {args.sign!r}")
    if args.genus < 0:
        raise CliError(EXIT_PARSE, "genus must be nonnegative")
    return Signature(args.genus, prongs, args.sign)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"{path} is not JSON: {exc}")


def _load_config(path):
    data = _load_json(path)
    missing = [k for k in ("half_edges", "rotation", "labels") if not isinstance(data, dict) or k not in data]
    if missing:
        raise CliError(EXIT_PARSE, f"{path} is not a configuration file: missing {', '.join(missing)}")
    try:
        return cfgmod.from_json(data)
    except MalformedConfiguration:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(EXIT_PARSE, f"{path} is not a configuration file: {exc}")


def _source(args):
    """Configuration named by --block / --asset or read from the file argument."""
    if getattr(args, "block", None):
        try:
            return building_block(args.block)
        except UnknownBlock as exc:
            raise CliError(EXIT_PARSE, str(exc))
    if getattr(args, "asset", None):
        try:
            return load_asset(args.asset)
        except UnknownBlock as exc:
            raise CliError(EXIT_PARSE, str(exc))
    if not args.file:
        raise CliError(EXIT_PARSE, "give a file, --block or --asset")
    return _load_config(args.file)


# --- subcommands -------------------------------------------------------------

def cmd_bound(args):
    sig = _signature(args)
    res = euler_residual(sig)
    out = {"genus": sig.genus, "prongs": sorted(sig.prongs), "sign": sig.sign,
           "euler_residual": res, "admissible": is_admissible(sig),
           "exceptional": is_exceptional(sig), "k": None}
    try:
        out["k"] = optimal_count(sig)
    except OddParity as exc:
        out["error"] = str(exc)
    code = EXIT_OK if out["admissible"] else EXIT_INADMISSIBLE
    return out, code


def _write_figures(cfg, args):
    written = []
    if getattr(args, "svg", None):
        Path(args.svg).write_text(draw.config_svg(cfg))
        written.append(args.svg)
    if getattr(args, "dot", None):
        Path(args.dot).write_text(draw.config_dot(cfg))
        written.append(args.dot)
    return written


def cmd_realize(args):
    from .realize import realize_signature
    sig = _signature(args)
    try:
        cfg = realize_signature(sig.genus, sig.prongs, sig.sign)
    except (ExceptionalSignature, EulerViolation, ParityViolation) as exc:
        return {"signature": format_signature(sig), "error": type(exc).__name__,
                "detail": str(exc)}, EXIT_INADMISSIBLE
    except (MalformedConfiguration, StrataError) as exc:
        return {"signature": format_signature(sig), "error": type(exc).__name__,
                "detail": str(exc)}, EXIT_VERIFY
    rep = cfgmod.verify(cfg)
    out = _config_report(cfg, rep)
    data = cfgmod.to_json(cfg)
    if args.out:
        Path(args.out).write_text(json.dumps(data, sort_keys=True, indent=1) + "\n")
        out["written"] = [args.out]
    else:
        out["configuration"] = data
    out.setdefault("written", []).extend(_write_figures(cfg, args))
    return out, EXIT_OK


def _config_report(cfg, rep):
    return {"name": cfg.name, "genus": rep["genus"], "prongs": rep["prongs"], "sign": rep["sign"],
            "k": rep["k"], "optimal_k": rep["optimal_k"], "triangular": rep["triangular"],
            "optimal": rep["optimal"], "intersections": rep["intersections"],
            "crossing_types": rep["crossing_types"], "vertices": rep["vertices"],
            "edges": rep["edges"], "faces": rep["faces"]}


def _verify_one(path):
    try:
        cfg = _load_config(path)
        rep = cfgmod.verify(cfg, strict=False)
    except MalformedConfiguration as exc:
        return {"file": str(path), "ok": False, "error": str(exc)}, EXIT_VERIFY
    out = _config_report(cfg, rep)
    out["file"] = str(path)
    out["ok"] = bool(rep["optimal"])
    if not rep["triangular"]:
        out["error"] = "not triangular"
    elif not rep["optimal"]:
        out["error"] = f"k={rep['k']} but the optimal count is {rep['optimal_k']}"
    return out, (EXIT_OK if out["ok"] else EXIT_VERIFY)


def cmd_verify(args):
    if args.all:
        files = sorted(Path(args.all).glob("*.json"))
        results, code = [], EXIT_OK
        for p in files:
            r, c = _verify_one(p)
            results.append(r)
            code = max(code, c)
        return {"files": results, "ok": code == EXIT_OK}, code
    if not args.file:
        raise CliError(EXIT_PARSE, "verify needs a file or --all DIR")
    return _verify_one(args.file)


def _track_from(args):
    """Collapsed track of a configuration file, or a track file as is."""
    if args.file and not (args.block or args.asset):
        data = _load_json(args.file)
        if "switches" in data:
            try:
                t = traintrack.from_json(data)
                traintrack.validate_track(t)
            except MalformedTrack as exc:
                raise CliError(EXIT_VERIFY, f"malformed track: {exc}")
            return t, None
    cfg = _source(args)
    ct = smoothing.collapse_config(cfg)
    return ct.track, ct


def cmd_track(args):
    t, ct = _track_from(args)
    everything = not (args.kernel or args.dims or args.bound)
    info = traintrack.region_summary(t)
    out = {"branches": t.n_branches, "switches": len(t.switches),
           "genus": traintrack.genus(t), "orientability": traintrack.orientability(t),
           "n_odd": info["n_odd"], "n_even": info["n_even"], "regions": info["prongs"]}
    code = EXIT_OK
    if everything or args.dims:
        out["dim_W"] = len(traintrack.weight_space_basis(t))
        out["euler_char"] = t.euler_char
    if everything or args.kernel:
        out["kernel_dim"] = traintrack.kernel_dimension(t)
        out["kernel_from_regions"] = len(traintrack.kernel_basis(t))
    if everything or args.bound:
        out["bound"] = traintrack.ergodic_upper_bound(t)
        out["expected_bound"] = traintrack.expected_bound(t)
        if out["bound"] != out["expected_bound"]:
            code = EXIT_VERIFY
    if ct is not None:
        try:
            smoothing.checked_superbranches(ct)
            out["superbranch_rank"] = 2 * ct.cfg.k
        except RankDeficient as exc:
            out["superbranch_error"] = str(exc)
            code = EXIT_VERIFY
    if args.report:
        d = Path(args.report)
        d.mkdir(parents=True, exist_ok=True)
        with open(d / "track_regions.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["region", "cusps", "punctured"])
            for r in traintrack.regions(t):
                w.writerow([r.index, r.cusp_count, int(r.punctured)])
        figs = draw.report_figures(d, "track", track_info=info)
        out["written"] = [str(d / "track_regions.csv")] + [str(p) for p in figs]
    return out, code


def _experiment(args):
    if args.block:
        return {"k": None, "m": building_block(args.block).intersection_matrix()}
    if args.file:
        data = _load_json(args.file)
        if "m" in data:
            return data
        return {"m": cfgmod.from_json(data).intersection_matrix()}
    raise CliError(EXIT_PARSE, "simulate needs an experiment file or --block")


def cmd_simulate(args):
    exp = _experiment(args)
    try:
        data = twist.IntersectionData(exp["m"])
    except StrataError as exc:
        raise CliError(EXIT_PARSE, f"bad intersection data: {exc}")
    sched = exp.get("schedule", {}) or {}
    if sched.get("kind", "geometric") != "geometric":
        raise CliError(EXIT_PARSE, "only geometric schedules are supported")
    steps = int(args.steps or exp.get("steps", 30))
    ratio = Fraction(str(sched.get("ratio", "1/2")))
    tol = exp.get("tolerances", {}) or {}
    angle_tol = float(tol.get("angle", 1e-6))
    sv_min = float(tol.get("singular", 1e-3))
    hull_tol = float(tol.get("hull", 1e-6))
    res = twist.cone_iteration(data, twist.geometric_schedule(steps, ratio), hull_tol=hull_tol)
    s = twist.summary(res)
    checks = {
        "angle_stable": s["k"] == 1 or s["separation_spread"] <= angle_tol,
        "nondegenerate": s["nondegeneracy"] >= sv_min,
        "tail_inside": s["tail_columns_inside"],
    }
    out = {"m": [list(r) for r in data.m], "steps": steps, "ratio": ratio, "checks": checks,
           **{k: v for k, v in s.items() if k != "diameter"}}
    if args.report:
        d = Path(args.report)
        d.mkdir(parents=True, exist_ok=True)
        with open(d / "simulate_angles.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "separation", "diameter"])
            for h in res["history"]:
                sep = "" if h["separation"] is None else repr(float(h["separation"]))
                w.writerow([h["step"], sep, repr(float(h["diameter"]))])
        figs = draw.report_figures(d, "simulate", simulation=s)
        out["written"] = [str(d / "simulate_angles.csv")] + [str(p) for p in figs]
    return out, (EXIT_OK if all(checks.values()) else EXIT_VERIFY)


def cmd_export(args):
    fmt = args.format
    if args.file and not (args.block or args.asset):
        data = _load_json(args.file)
        if "switches" in data:
            try:
                t = traintrack.from_json(data)
            except MalformedTrack as exc:
                raise CliError(EXIT_PARSE, str(exc))
            if fmt == "svg":
                raise CliError(EXIT_PARSE, "tracks export to json or dot only")
            text = (json.dumps(traintrack.to_json(t), sort_keys=True, indent=1) + "\n"
                    if fmt == "json" else draw.track_dot(t))
            return _export_text(text, args)
    cfg = _source(args)
    if args.track:
        t = smoothing.collapse_config(cfg).track
        if fmt == "svg":
            raise CliError(EXIT_PARSE, "tracks export to json or dot only")
        text = (json.dumps(traintrack.to_json(t), sort_keys=True, indent=1) + "\n"
                if fmt == "json" else draw.track_dot(t))
    elif fmt == "json":
        text = json.dumps(cfgmod.to_json(cfg), sort_keys=True, indent=1) + "\n"
    elif fmt == "svg":
        text = draw.config_svg(cfg)
    else:
        text = draw.config_dot(cfg)
    return _export_text(text, args)


def _export_text(text, args):
    if args.out:
        Path(args.out).write_text(text)
        return {"format": args.format, "written": [args.out]}, EXIT_OK
    sys.stdout.write(text)
    return None, EXIT_OK


# --- parser -----------------------------------------------------------------

def _sig_flags(p):
    p.add_argument("-g", "--genus", type=int, required=True)
    p.add_argument("-R", "--regions", default="", help="comma separated prong counts")
    p.add_argument("-s", "--sign", default="-", help="'+' orientable, '-' not")


def _source_flags(p):
    p.add_argument("file", nargs="?")
    p.add_argument("--block", help=f"built-in block: {', '.join(BLOCK_NAMES)}")
    p.add_argument("--asset", help="hand-built configuration from the asset directory")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_PARSE, message)


def build_parser():
    top = _Parser(prog="strata", description=__doc__.splitlines()[0])
    top.add_argument("--pretty", action="store_true", help="indent JSON output")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="optimal pair count for a signature")
    _sig_flags(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("realize", help="build a certified optimal configuration")
    _sig_flags(p)
    p.add_argument("-o", "--out", help="write the configuration JSON here")
    p.add_argument("--svg")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("verify", help="check a configuration file")
    p.add_argument("file", nargs="?")
    p.add_argument("--all", metavar="DIR", help="verify every JSON file in DIR")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("track", help="collapsed train track of a configuration")
    _source_flags(p)
    p.add_argument("--kernel", action="store_true")
    p.add_argument("--dims", action="store_true")
    p.add_argument("--bound", action="store_true")
    p.add_argument("--report", metavar="DIR", help="write CSV and figures to DIR")
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("simulate", help="twist-matrix cone contraction")
    p.add_argument("file", nargs="?", help="experiment JSON or configuration JSON")
    p.add_argument("--block", help="use the intersection data of a built-in block")
    p.add_argument("--steps", type=int)
    p.add_argument("--report", metavar="DIR", help="write CSV and figures to DIR")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("export", help="write a configuration or track as json, svg or dot")
    _source_flags(p)
    p.add_argument("-f", "--format", choices=["json", "svg", "dot"], default="json")
    p.add_argument("--track", action="store_true", help="export the collapsed track")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_export)

    sub.add_parser("assets", help="list hand-built assets").set_defaults(
        func=lambda a: ({"assets": list_assets()}, EXIT_OK))
    return top


def main(argv=None):
    parser = build_parser()
    pretty = False
    try:
        args = parser.parse_args(argv)
        pretty = args.pretty
        out, code = args.func(args)
    except CliError as exc:
        emit({"error": str(exc)}, pretty, sys.stderr)
        return exc.code
    except (MalformedConfiguration, CollapseObstruction, MalformedTrack) as exc:
        emit({"error": type(exc).__name__, "detail": str(exc)}, pretty, sys.stderr)
        return EXIT_VERIFY
    if out is not None:
        emit(out, pretty)
    return code


if __name__ == "__main__":
    sys.exit(main())
