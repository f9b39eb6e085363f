"""Command-line front end.

Subcommands: build, validate, st1, st2, distance, report.  Exit codes
follow a strict contract: 0 on success, 1 when a mathematical check fails
(validation residuals above tolerance, an inconsistent verdict, or a
numeric failure), 2 on input errors (malformed configs or files, bad
probes, unsupported inputs).

Complex probes are written like ``i``, ``2i``, ``1+i``, ``-0.5-2i`` on the
command line and as {re, im} objects in JSON.  CSV floats carry 17
significant digits; JSON reports are deterministic for a fixed config and
version.  The probe grid may be evaluated concurrently by setting
SPECTRAL_LIMITS_THREADS; results are merged in index order either way.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .diagnostics import (
    DEFAULT_LAMBDAS,
    FUNCTION_PROBES,
    CommutatorSeries,
    GapSeries,
    commutator_series,
    default_st2_probe,
    gap_series,
    resolvent_gap_eigen,
    st1_verdict,
    st2_verdict,
)
from .distance import connes_distance_with_path
from .errors import (
    NumericError,
    SpectralLimitsError,
    UnsupportedError,
    ValidationError,
)
from .inductive import InductiveSystem, realize, system_validate
from .serialization import (
    dumps,
    element_from_json,
    load_system,
    save_system,
    system_from_generator_config,
)

EXIT_OK = 0
EXIT_MATH = 1
EXIT_INPUT = 2


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' command-line complex numbers ('i', '2i', '1+i', ...)."""
    t = text.strip().replace(" ", "").replace("I", "i").replace("j", "i")
    t = t.replace("i", "j")
    t = re.sub(r"(?<![\d.])j", "1j", t)
    try:
        return complex(t)
    except ValueError as exc:
        raise ValidationError(f"cannot parse complex number {text!r}") from exc


def parse_levels(text: str, top: int) -> list[int]:
    """Parse 'a..b' (inclusive) or a single level."""
    t = text.strip()
    if ".." in t:
        a_str, b_str = t.split("..", 1)
        a, b = int(a_str), int(b_str)
    else:
        a = b = int(t)
    if not (0 <= a <= b <= top):
        raise ValidationError(f"level range {text!r} outside [0, {top}]")
    return list(range(a, b + 1))


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{float(x):.17g}"


def _thread_count() -> int:
    raw = os.environ.get("SPECTRAL_LIMITS_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _parallel_map(fn, items):
    workers = _thread_count()
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _load_system_arg(args) -> InductiveSystem:
    if getattr(args, "system", None):
        return load_system(args.system)
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
        return system_from_generator_config(cfg)
    raise ValidationError("give --system FILE or --config FILE")


def _write_or_print(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _system_summary(system: InductiveSystem) -> dict:
    return {
        "levels": system.top_level,
        "hilbert_dims": [t.hilbert_dim for t in system.triples],
        "generator": system.provenance.get("kind", "unknown"),
    }


def _gap_rows(system: InductiveSystem, series: GapSeries, cross: dict | None) -> list[list[str]]:
    rows = []
    for idx, (j, gap) in enumerate(series.entries):
        bound = None
        if series.analytic_bounds is not None:
            bound = series.analytic_bounds[idx]
        delta = None if cross is None else cross.get(j)
        rows.append(
            [
                series.kind,
                str(j),
                _fmt(series.lam.real) if series.lam is not None else "",
                _fmt(series.lam.imag) if series.lam is not None else "",
                series.f_name or "",
                _fmt(gap),
                _fmt(bound),
                _fmt(delta),
            ]
        )
    return rows


GAP_CSV_HEADER = "kind,j,lambda_re,lambda_im,f_name,gap,analytic_bound,eigen_gap_delta"


def cmd_build(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not isinstance(cfg, dict) or "type" not in cfg or "levels" not in cfg:
        print("error: config must be an object with 'type' and 'levels'", file=sys.stderr)
        return EXIT_INPUT
    try:
        system = system_from_generator_config(cfg)
    except SpectralLimitsError as exc:
        print(f"error: generator failed: {exc}", file=sys.stderr)
        return EXIT_MATH
    save_system(system, args.out)
    summary = _system_summary(system)
    print(f"wrote {args.out}: {summary['generator']} system, levels 0..{summary['levels']}, dims {summary['hilbert_dims']}")
    return EXIT_OK


def cmd_validate(args) -> int:
    system = _load_system_arg(args)
    report = system_validate(system)
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_MATH


def cmd_st1(args) -> int:
    system = _load_system_arg(args)
    r = realize(system)
    levels = parse_levels(args.levels, r.level) if args.levels else list(range(r.level + 1))
    lambdas = [parse_complex(s) for s in (args.lam or [])] or list(DEFAULT_LAMBDAS)
    for lam in lambdas:
        if lam.imag == 0.0:
            raise ValidationError(f"resolvent probe {lam:g} is real; probes must be non-real")
    functions = args.function or []
    for name in functions:
        if name not in FUNCTION_PROBES:
            raise ValidationError(f"unknown probe function {name!r}; known: {sorted(FUNCTION_PROBES)}")

    group_tol = args.tol_group
    contain_tol = args.tol_contain

    def one_lambda(lam):
        series = gap_series(r, lam=lam, j_range=levels)
        cross = {
            j: abs(
                gap
                - resolvent_gap_eigen(r, j, lam, group_tol=group_tol, contain_tol=contain_tol)
            )
            for j, gap in series.entries
        }
        return series, cross

    resolvent_results = _parallel_map(one_lambda, lambdas)
    function_results = _parallel_map(lambda name: gap_series(r, f_name=name, j_range=levels), functions)

    lines = [GAP_CSV_HEADER]
    for series, cross in resolvent_results:
        for row in _gap_rows(system, series, cross):
            lines.append(",".join(row))
    for series in function_results:
        for row in _gap_rows(system, series, None):
            lines.append(",".join(row))
    csv_text = "\n".join(lines) + "\n"

    probes = []
    worst_cross = 0.0
    for (series, cross), lam in zip(resolvent_results, lambdas):
        verdict = st1_verdict(series, threshold=args.threshold, window=args.window)
        worst_cross = max(worst_cross, max(cross.values(), default=0.0))
        probes.append(
            {
                "lambda": {"re": lam.real, "im": lam.imag},
                "classification": verdict.classification,
                "evidence": verdict.evidence,
                "caveat": verdict.caveat,
                "max_eigen_gap_delta": max(cross.values(), default=0.0),
            }
        )
    verdict_doc = {
        "kind": "st1",
        "system": _system_summary(system),
        "probes": probes,
        "version": __version__,
    }

    if args.out:
        _write_or_print(csv_text, args.out + ".csv")
        _write_or_print(dumps(verdict_doc) + "\n", args.out + ".json")
        print(f"wrote {args.out}.csv and {args.out}.json")
    else:
        sys.stdout.write(csv_text)
        sys.stdout.write(dumps(verdict_doc) + "\n")
    if any(p["classification"] == "inconsistent" for p in probes):
        return EXIT_MATH
    return EXIT_OK


ST2_CSV_HEADER = "kind,base_level,element,k,norm"


def _st2_series(args, system: InductiveSystem) -> list[tuple[str, CommutatorSeries]]:
    k_max = system.top_level
    if args.element:
        out = []
        for spec_item in args.element:
            if os.path.exists(spec_item):
                with open(spec_item, "r", encoding="utf-8") as fh:
                    doc = json.load(fh)
            else:
                try:
                    doc = json.loads(spec_item)
                except json.JSONDecodeError as exc:
                    raise ValidationError(f"--element must be a file or inline JSON: {exc}")
            j = int(doc["level"])
            if not (0 <= j <= system.top_level):
                raise ValidationError(f"element level {j} outside the system range")
            algebra = system.triples[j].algebra
            if "values" in doc:
                elem = algebra.from_point_values(np.asarray(doc["values"], dtype=complex))
            else:
                elem = element_from_json({"algebra": {"block_dims": list(algebra.block_dims)}, "blocks": doc["blocks"]})
            out.append((doc.get("name", f"element@{j}"), commutator_series(system, j, elem, k_max)))
        return out
    levels = parse_levels(args.levels, k_max) if args.levels else None
    probe = default_st2_probe(system, levels=levels, k_max=k_max)
    return [(f"basis{i}@{s.base_level}", s) for i, s in enumerate(probe)]


def cmd_st2(args) -> int:
    system = _load_system_arg(args)
    named = _st2_series(args, system)
    lines = [ST2_CSV_HEADER]
    for name, series in named:
        for k, v in series.entries:
            lines.append(",".join(["commutator", str(series.base_level), name, str(k), _fmt(v)]))
    csv_text = "\n".join(lines) + "\n"
    verdict = st2_verdict([s for _, s in named], bound=args.bound)
    verdict_doc = {
        "kind": "st2",
        "system": _system_summary(system),
        "classification": verdict.classification,
        "evidence": verdict.evidence,
        "caveat": verdict.caveat,
        "series_names": [name for name, _ in named],
        "version": __version__,
    }
    if args.out:
        _write_or_print(csv_text, args.out + ".csv")
        _write_or_print(dumps(verdict_doc) + "\n", args.out + ".json")
        print(f"wrote {args.out}.csv and {args.out}.json")
    else:
        sys.stdout.write(csv_text)
        sys.stdout.write(dumps(verdict_doc) + "\n")
    return EXIT_MATH if verdict.classification == "inconsistent" else EXIT_OK


def _resolve_point(triple, text: str) -> int:
    points = triple.meta.get("points")
    try:
        if points is not None:
            x = float(text)
            best = min(range(len(points)), key=lambda i: abs(points[i] - x))
            if abs(points[best] - x) > 1e-9 * max(1.0, abs(x)):
                raise ValidationError(f"{text!r} is not a point of this level (points: {points})")
            return best
        return int(text)
    except ValueError as exc:
        raise ValidationError(f"cannot parse point {text!r}") from exc


def cmd_distance(args) -> int:
    system = _load_system_arg(args)
    j = int(args.level)
    if not (0 <= j <= system.top_level):
        raise ValidationError(f"level {j} outside the system range")
    triple = system.triples[j]
    x = _resolve_point(triple, args.x)
    y = _resolve_point(triple, args.y)
    value, path = connes_distance_with_path(triple, x, y)
    points = triple.meta.get("points")

    def label(p):
        return _fmt(points[p]) if points is not None else str(p)

    if math.isinf(value):
        print(f"d({label(x)}, {label(y)}) = infinite (points lie in disconnected components)")
    else:
        print(f"d({label(x)}, {label(y)}) = {_fmt(value)}")
        if path is not None:
            print("path: " + " -> ".join(label(p) for p in path))
    return EXIT_OK


def cmd_report(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict) or "system" not in cfg:
        raise ValidationError("report config must contain a 'system' entry")
    sys_cfg = cfg["system"]
    if isinstance(sys_cfg, dict) and "path" in sys_cfg:
        system = load_system(sys_cfg["path"])
    else:
        system = system_from_generator_config(sys_cfg)
    lambdas = [parse_complex(s) for s in cfg.get("lambdas", ["i", "2i", "1+i"])]
    for lam in lambdas:
        if lam.imag == 0.0:
            raise ValidationError(f"resolvent probe {lam:g} is real; probes must be non-real")
    functions = cfg.get("functions", [])
    r = realize(system)
    levels = cfg.get("levels")
    j_range = list(range(levels[0], levels[1] + 1)) if levels else list(range(r.level + 1))

    validation = system_validate(system)
    gap_docs = []
    for lam in lambdas:
        series = gap_series(r, lam=lam, j_range=j_range)
        verdict = st1_verdict(series)
        gap_docs.append(
            {
                "lambda": {"re": lam.real, "im": lam.imag},
                "entries": [{"j": j, "gap": v} for j, v in series.entries],
                "analytic_bounds": [None if b is None else b for b in series.analytic_bounds],
                "classification": verdict.classification,
                "evidence": verdict.evidence,
                "caveat": verdict.caveat,
            }
        )
    for name in functions:
        series = gap_series(r, f_name=name, j_range=j_range)
        gap_docs.append(
            {
                "function": name,
                "entries": [{"j": j, "gap": v} for j, v in series.entries],
            }
        )
    st2_probe = default_st2_probe(system)
    st2 = st2_verdict(st2_probe)
    doc = {
        "system": _system_summary(system),
        "validation": {
            "passed": validation.passed,
            "worst_residual": validation.worst,
            "failing_triple": validation.failing_triple,
            "failing_link": validation.failing_link,
        },
        "gap_series": gap_docs,
        "commutator_series": [
            {"base_level": s.base_level, "entries": [{"k": k, "norm": v} for k, v in s.entries]}
            for s in st2_probe
        ],
        "st2": {
            "classification": st2.classification,
            "evidence": st2.evidence,
            "caveat": st2.caveat,
        },
        "version": __version__,
        "config": cfg,
    }
    _write_or_print(dumps(doc) + "\n", args.out)
    failed = (
        not validation.passed
        or st2.classification == "inconsistent"
        or any(g.get("classification") == "inconsistent" for g in gap_docs)
    )
    return EXIT_MATH if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-limits",
        description="Inductive systems of finite spectral triples: builders, validation and ST1/ST2 diagnostics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a system from a generator config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("validate", help="validate triples and links of a system")
    p.add_argument("--system")
    p.add_argument("--config")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("st1", help="resolvent gap series, eigen cross-check and verdicts")
    p.add_argument("--system")
    p.add_argument("--config")
    p.add_argument("--lambda", dest="lam", action="append", help="non-real probe, e.g. 'i' or '1+2i' (repeatable)")
    p.add_argument("--function", action="append", help=f"named probe function (repeatable); known: {sorted(FUNCTION_PROBES)}")
    p.add_argument("--levels", help="level range a..b")
    p.add_argument("--out", help="output prefix (.csv and .json are appended)")
    p.add_argument("--format", choices=["csv"], default="csv")
    p.add_argument("--tol-group", dest="tol_group", type=float, default=1e-8)
    p.add_argument("--tol-contain", dest="tol_contain", type=float, default=1e-8)
    p.add_argument("--threshold", type=float, default=1e-3)
    p.add_argument("--window", type=int, default=5)
    p.set_defaults(func=cmd_st1)

    p = sub.add_parser("st2", help="commutator-norm series and verdicts")
    p.add_argument("--system")
    p.add_argument("--config")
    p.add_argument("--element", action="append", help="JSON file or inline JSON {'level': j, 'values': [...]} (repeatable)")
    p.add_argument("--levels", help="base-level range a..b for the default probe")
    p.add_argument("--bound", type=float, default=None)
    p.add_argument("--out", help="output prefix (.csv and .json are appended)")
    p.add_argument("--format", choices=["csv"], default="csv")
    p.set_defaults(func=cmd_st2)

    p = sub.add_parser("distance", help="spectral distance between two points of a level")
    p.add_argument("--system")
    p.add_argument("--config")
    p.add_argument("--level", required=True, type=int)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("report", help="aggregate validation + ST1 + ST2 report")
    p.add_argument("--config", required=True, help="run config JSON")
    p.add_argument("--out", help="output path (stdout if omitted)")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, UnsupportedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: bad input: {exc!r}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"error: numeric failure: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
