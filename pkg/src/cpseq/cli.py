"""Command-line surface: sequence dumps, fidelity curves, thresholds,
series diagnostics, and the Ising schedule compiler.

Angles are degrees at this boundary and radians everywhere inside.  All
outputs are deterministic: a fixed configuration produces byte-identical
files.  Exit codes: 0 success, 1 usage error, 2 I/O error, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import analysis, ising_gate
from .sequences import Family, build_family

VERIFY_TOL = 1e-9
VERIFY_GRID = (-1.2, 0.3, 501)

_CORRECTED = (Family.BB1, Family.NB1, Family.PB1)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _sign_value(text: str) -> int:
    return 1 if text == "+" else -1


def _add_family(p, required: bool = True):
    p.add_argument(
        "--family",
        choices=[f.value for f in (Family.SIMPLE, Family.BB1, Family.NB1, Family.PB1)],
        required=required,
        help="sequence family",
    )


def _add_common(p):
    p.add_argument("--theta", type=float, default=90.0, metavar="DEG",
                   help="target rotation angle in degrees (default 90)")
    p.add_argument("--sign", choices=["+", "-"], default="+",
                   help="branch of the +/- phase solution (default +)")
    p.add_argument("--out", metavar="PATH", default=None,
                   help="output file (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cpseq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sequence", help="dump the pulse list of a sequence")
    _add_family(p)
    _add_common(p)
    p.set_defaults(func=cmd_sequence)

    p = sub.add_parser("curve", help="fidelity curve F(g) as CSV")
    _add_family(p)
    _add_common(p)
    p.add_argument("--ideal", type=float, default=0.0, metavar="DEG",
                   help="reference rotation in degrees; 0 compares against the identity")
    p.add_argument("--gmin", type=float, default=-2.0)
    p.add_argument("--gmax", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=801)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("thresholds", help="epsilon/delta table for all four families")
    _add_common(p)
    p.add_argument("--tol", type=float, default=analysis.DEFAULT_TOL,
                   help="infidelity tolerance (default 1e-6)")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("compile", help="compile a sequence to an Ising gate schedule")
    _add_family(p)
    _add_common(p)
    p.add_argument("--spin", type=int, choices=[0, 1], default=1,
                   help="spin carrying the phase pulses (default 1)")
    p.add_argument("--verify", action="store_true",
                   help="check propagator/quaternion fidelity equivalence over a g grid")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("expand", help="finite-difference error expansion table")
    _add_family(p)
    _add_common(p)
    p.add_argument("--point", type=float, choices=[0.0, -1.0], default=0.0,
                   help="expansion point (0 or -1)")
    p.add_argument("--order", type=int, default=2, help="highest derivative order (1..4)")
    p.set_defaults(func=cmd_expand)

    return parser


def _usage_error(message: str) -> int:
    sys.stderr.write(f"cpseq: error: {message}\n")
    return 1


def _write_output(text: str, out, summary: str | None = None) -> int:
    if out is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        sys.stderr.write(f"cpseq: cannot write {out}: {exc}\n")
        return 2
    if summary:
        print(summary)
    return 0


def _build_seq(args):
    if not 0.0 < args.theta <= 360.0:
        raise ValueError(f"--theta must lie in (0, 360], got {args.theta}")
    return build_family(Family(args.family), math.radians(args.theta), _sign_value(args.sign))


def cmd_sequence(args) -> int:
    try:
        seq = _build_seq(args)
    except ValueError as exc:
        return _usage_error(str(exc))
    header = f"# family={seq.family.value} theta_deg={args.theta:.17g} sign={args.sign}1"
    if seq.family in _CORRECTED:
        header += f" phi1_deg={math.degrees(seq.elements[1].phase):.17g}"
    lines = [header]
    lines.extend(
        f"{math.degrees(el.angle):.17g}\t{math.degrees(el.display_phase):.17g}"
        for el in seq.elements
    )
    text = "\n".join(lines) + "\n"
    return _write_output(text, args.out, f"wrote {len(seq.elements)} pulses to {args.out}")


def cmd_curve(args) -> int:
    try:
        seq = _build_seq(args)
        points = analysis.infidelity_curve(
            seq, math.radians(args.ideal), args.gmin, args.gmax, args.samples
        )
    except ValueError as exc:
        return _usage_error(str(exc))
    text = "\n".join(analysis.curve_csv_lines(points)) + "\n"
    summary = (
        f"curve family={seq.family.value} theta_deg={args.theta:.17g} "
        f"ideal_deg={args.ideal:.17g} samples={args.samples} -> {args.out}"
    )
    return _write_output(text, args.out, summary)


def cmd_thresholds(args) -> int:
    if not 0.0 < args.theta <= 360.0:
        return _usage_error(f"--theta must lie in (0, 360], got {args.theta}")
    if not args.tol > 0.0:
        return _usage_error(f"--tol must be positive, got {args.tol}")
    reports = analysis.solve_thresholds(
        math.radians(args.theta), args.tol, _sign_value(args.sign)
    )
    text = analysis.threshold_reports_json(reports)
    summary = f"thresholds theta_deg={args.theta:.17g} tol={args.tol:.17g} -> {args.out}"
    return _write_output(text, args.out, summary)


def _t_units(duration: float):
    return int(round(duration)) if abs(duration - round(duration)) < 1e-12 else duration


def _schedule_payload(sched) -> dict:
    items = []
    for it in sched.items:
        if isinstance(it, ising_gate.FreeEvolution):
            items.append({"type": "delay", "t_units": _t_units(it.duration)})
        else:
            items.append(
                {
                    "type": "pulse",
                    "spin": it.spin,
                    "angle_deg": math.degrees(it.angle),
                    "axis": "+y" if it.axis_sign > 0 else "-y",
                }
            )
    return {
        "family": sched.source_family.value,
        "theta_deg": math.degrees(sched.target_angle),
        "total_t_units": _t_units(sched.total_duration),
        "items": items,
    }


def cmd_compile(args) -> int:
    try:
        seq = _build_seq(args)
        sched = ising_gate.compile_ising(seq, args.spin)
    except ValueError as exc:
        return _usage_error(str(exc))
    text = json.dumps(_schedule_payload(sched), indent=2) + "\n"
    summary = (
        f"compile family={seq.family.value} theta_deg={args.theta:.17g} "
        f"spin={args.spin} total_t_units={_t_units(sched.total_duration)} -> {args.out}"
    )
    code = _write_output(text, args.out, summary)
    if code != 0:
        return code
    if args.verify:
        gs = np.linspace(*VERIFY_GRID)
        deviation = ising_gate.equivalence_deviation(seq, sched, gs)
        print(
            f"verify: max |propagator - quaternion| fidelity deviation "
            f"{deviation:.3e} over {VERIFY_GRID[2]} points in "
            f"[{VERIFY_GRID[0]:g}, {VERIFY_GRID[1]:g}]"
        )
        if deviation > VERIFY_TOL:
            sys.stderr.write(
                f"cpseq: verification failed: deviation {deviation:.3e} > {VERIFY_TOL:g}\n"
            )
            return 3
    return 0


def cmd_expand(args) -> int:
    try:
        seq = _build_seq(args)
        report = analysis.error_expansion(
            seq, seq.target_angle, args.point, max_order=args.order
        )
    except ValueError as exc:
        return _usage_error(str(exc))
    lines = [
        f"# family={seq.family.value} theta_deg={args.theta:.17g} "
        f"point={args.point:g} step={report.step:g}",
        f"# components: {' '.join(analysis.COMPONENT_LABELS)}",
    ]
    for est in report.orders:
        cols = " ".join(f"{m:.6e}" for m in est.magnitudes)
        if est.below_floor:
            status = "below noise floor"
        elif est.significant.any():
            labels = [
                analysis.COMPONENT_LABELS[i] for i in np.nonzero(est.significant)[0]
            ]
            status = "significant: " + ",".join(labels)
        else:
            status = "within truncation error"
        lines.append(f"order {est.order}: {cols}  floor {est.noise_floor:.3e}  {status}")
    text = "\n".join(lines) + "\n"
    return _write_output(text, args.out, f"expansion ({len(report.orders)} orders) -> {args.out}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


def entrypoint() -> None:
    sys.exit(main())
