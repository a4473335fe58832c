"""``memsmic`` command line.

Exit codes: 0 success, 2 invalid input, 3 infeasible / physically excluded
operating point, 4 numeric self-check failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import acoustics, search, statics
from .design import PARAMETERS, load_design, require_valid
from .errors import InvalidInput, MicError, NumericFailure
from .report import analyze, format_text
from .units import Kind, parse, sensitivity_to_db

SWEEP_METRICS = ("S_m", "S_o_db", "V_p", "C0", "cutoff", "R_total")


def _g9(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.9g}"


def _quantity(kind: Kind):
    def convert(text: str) -> float:
        try:
            return parse(text, kind)
        except InvalidInput as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    convert.__name__ = kind.name.lower()
    return convert


def _load(path: str):
    return require_valid(load_design(path))


def log_grid(fmin: float, fmax: float, points_per_decade: int) -> list[float]:
    """Geometric grid ``fmin * 10**(i/N)`` up to ``fmax``; ``fmax`` is always the last point."""
    out = []
    i = 0
    while True:
        f = fmin * 10.0 ** (i / points_per_decade)
        if f >= fmax * (1 - 1e-12):
            break
        out.append(f)
        i += 1
    out.append(fmax)
    return out


def cmd_analyze(args, out) -> int:
    report = analyze(_load(args.design), args.bias)
    if args.format == "text":
        out.write(format_text(report))
    else:
        out.write(json.dumps(report.to_dict(), indent=2) + "\n")
    return 0


def cmd_freq(args, out) -> int:
    if not (0 < args.fmin < args.fmax):
        raise InvalidInput(f"need 0 < fmin < fmax, got fmin={args.fmin:g} fmax={args.fmax:g}")
    if args.points_per_decade < 1:
        raise InvalidInput("points per decade must be >= 1")
    design = _load(args.design)
    resp = acoustics.frequency_response(design, args.bias, log_grid(args.fmin, args.fmax, args.points_per_decade))
    out.write("frequency_hz,magnitude_db_re_v_pa,phase_deg\n")
    for f, mag, ph in resp.points:
        out.write(f"{_g9(f)},{_g9(mag)},{_g9(ph)}\n")
    return 0


def _metric(design, metric: str, bias: float) -> float:
    if metric == "S_m":
        require_valid(design)
        return statics.mechanical_sensitivity(design.diaphragm)
    if metric == "V_p":
        require_valid(design)
        return statics.design_pull_in(design)
    if metric == "C0":
        require_valid(design)
        return statics.parallel_plate_capacitance(design)
    if metric == "R_total":
        return acoustics.damping(design).total
    if metric == "cutoff":
        return acoustics.cutoff_frequency(design, bias)
    model = acoustics.lumped_model(design, bias)
    return sensitivity_to_db(model.dc_sensitivity)


def cmd_sweep(args, out, err) -> int:
    if args.param not in PARAMETERS:
        raise InvalidInput(f"unknown parameter {args.param!r}; choose from {', '.join(PARAMETERS)}")
    if args.metric not in SWEEP_METRICS:
        raise InvalidInput(f"unknown metric {args.metric!r}; choose from {', '.join(SWEEP_METRICS)}")
    if args.steps < 2:
        raise InvalidInput("--steps must be >= 2")
    if not (math.isfinite(args.start) and math.isfinite(args.stop)):
        raise InvalidInput("--from/--to must be finite")
    base = _load(args.design)
    out.write("param_value,metric_value\n")
    for v in search.linspace(args.start, args.stop, args.steps):
        try:
            value = _metric(base.with_parameter(args.param, v), args.metric, args.bias)
        except (InvalidInput, MicError) as exc:
            err.write(f"warning: {args.param}={_g9(v)}: {exc}\n")
            value = math.nan
        out.write(f"{_g9(v)},{_g9(value)}\n")
    return 0


def cmd_pullin(args, out) -> int:
    design = _load(args.design)
    closed = statics.design_pull_in(design)
    numeric = statics.pull_in_numeric(design)
    rel = abs(numeric - closed) / closed
    out.write("closed_form_v,numeric_v,relative_difference\n")
    out.write(f"{_g9(closed)},{_g9(numeric)},{_g9(rel)}\n")
    if rel > statics.PULL_IN_AGREEMENT:
        raise NumericFailure(f"pull-in self-check failed: relative difference {rel:.3g} > 0.1%")
    return 0


def cmd_optimize(args, out) -> int:
    space = search.load_space(args.space)
    constraints = search.load_constraints(args.constraints)
    if args.rounds < 0:
        raise InvalidInput("--rounds must be >= 0")
    result = search.grid_search(space, constraints)
    result = search.refine(space, constraints, result, args.rounds)
    text = result.to_json()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="memsmic", description="MEMS condenser microphone design analysis")
    sub = p.add_subparsers(dest="command", required=True)
    volts = _quantity(Kind.VOLTAGE)
    hz = _quantity(Kind.FREQUENCY)

    a = sub.add_parser("analyze", help="full analysis report for one design")
    a.add_argument("design", help="design JSON file")
    a.add_argument("--bias", type=volts, default=12.0, help="bias voltage (default 12 V)")
    a.add_argument("--format", choices=("json", "text"), default="json")

    f = sub.add_parser("freq", help="frequency response as CSV")
    f.add_argument("design")
    f.add_argument("--bias", type=volts, default=12.0)
    f.add_argument("--fmin", type=hz, default=20.0)
    f.add_argument("--fmax", type=hz, default=100e3)
    f.add_argument("--points-per-decade", type=int, default=50)

    s = sub.add_parser("sweep", help="sweep one design parameter and report a metric as CSV")
    s.add_argument("design")
    s.add_argument("--param", required=True, help=f"one of {', '.join(PARAMETERS)}")
    s.add_argument("--from", dest="start", type=float, required=True, help="start value (SI)")
    s.add_argument("--to", dest="stop", type=float, required=True, help="end value (SI)")
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--metric", required=True, help=f"one of {', '.join(SWEEP_METRICS)}")
    s.add_argument("--bias", type=volts, default=12.0)

    q = sub.add_parser("pullin", help="closed-form vs numeric pull-in voltage")
    q.add_argument("design")

    o = sub.add_parser("optimize", help="constrained grid search with refinement")
    o.add_argument("space", help="space JSON file")
    o.add_argument("constraints", help="constraints JSON file")
    o.add_argument("--rounds", type=int, default=3)
    o.add_argument("--out", help="write the result JSON here instead of standard output")
    return p


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "analyze":
            return cmd_analyze(args, out)
        if args.command == "freq":
            return cmd_freq(args, out)
        if args.command == "sweep":
            return cmd_sweep(args, out, err)
        if args.command == "pullin":
            return cmd_pullin(args, out)
        return cmd_optimize(args, out)
    except MicError as exc:
        err.write(f"memsmic: error: {exc}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
