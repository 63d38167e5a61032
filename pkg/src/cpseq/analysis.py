"""Fidelity curves, series-cancellation diagnostics, and tolerance thresholds.

Two figures of merit are computed for a sequence under the fractional
error g:

* ``epsilon`` -- the largest |g| around 0 for which the infidelity against
  the ideal target rotation stays at or below a tolerance (robustness to
  miscalibrated rotation rates / coupling strengths).
* ``delta`` -- the largest coupling fraction lambda = 1 + g, sweeping up
  from 0, for which the infidelity against the identity stays at or below
  the tolerance (ability to suppress small couplings).

Both use first-crossing semantics: the scan moves away from the expansion
point in steps of ``SCAN_STEP`` and stops at the first tolerance
violation, which is then sharpened by bisection.  The scan step is well
below the narrowest plateau of interest, so a crossing cannot be stepped
over.

The series diagnostics estimate the derivatives of the quaternion error
components by central finite differences with one Richardson refinement
(step ``h`` and ``h/2``).  Significance is judged against a noise floor
combining the floating-point roundoff scale with a calibration run on the
single-pulse sequence, whose error-component derivatives are known in
closed form.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .rotor_core import IDENTITY, quat_from_pulse
from .sequences import Family, PulseSequence, build_family, build_simple

__all__ = [
    "CurvePoint",
    "ThresholdReport",
    "OrderEstimate",
    "ExpansionReport",
    "infidelity_curve",
    "threshold_epsilon",
    "threshold_delta",
    "solve_thresholds",
    "first_tolerance_crossing",
    "error_expansion",
    "infidelity_loglog_slope",
    "curve_csv_lines",
    "threshold_reports_json",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-6
SCAN_STEP = 1e-4
SCAN_LIMIT = 1.0
BISECT_WIDTH = 1e-9

FD_STEP = 1e-3
COMPONENT_LABELS = ("w-w0", "x-x0", "y", "z")
_EPS = np.finfo(float).eps
_ROUND_SAFETY = 50.0
_CAL_SAFETY = 10.0
_TRUNC_SAFETY = 4.0


@dataclass(frozen=True)
class CurvePoint:
    g: float
    F: float


@dataclass(frozen=True)
class ThresholdReport:
    """epsilon/delta pair for one sequence family at one tolerance."""

    family: Family
    theta: float
    tol: float
    epsilon: float
    delta: float


def _ref_components(angle: float) -> np.ndarray:
    return quat_from_pulse(angle, 0.0).as_array()


def infidelity_curve(
    seq: PulseSequence,
    ideal_angle: float,
    g_min: float,
    g_max: float,
    samples: int,
) -> list[CurvePoint]:
    """Sample F(g) uniformly on [g_min, g_max] against the ideal rotation.

    ``ideal_angle = 0`` compares against the identity (the suppression
    channel); ``ideal_angle = theta`` against the intended rotation.
    """
    if not g_min < g_max:
        raise ValueError(f"need g_min < g_max, got [{g_min!r}, {g_max!r}]")
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples!r}")
    gs = np.linspace(g_min, g_max, samples)
    infid = _kernels.infidelity_grid(seq.angles, seq.phases, gs, _ref_components(ideal_angle))
    return [CurvePoint(float(g), float(1.0 - e)) for g, e in zip(gs, infid)]


def first_tolerance_crossing(
    infid_on_grid,
    tol: float,
    step: float = SCAN_STEP,
    limit: float = SCAN_LIMIT,
    bisect_width: float = BISECT_WIDTH,
) -> float:
    """First x > 0 where ``infid_on_grid`` exceeds ``tol``, or inf if none.

    ``infid_on_grid`` maps a 1-D array of non-negative scan positions to
    infidelities.  The grid scan brackets the first crossing, bisection
    narrows the bracket to ``bisect_width``, and the bracket midpoint is
    returned, so the infidelity at the returned value sits at the
    tolerance to within the local slope times ``bisect_width / 2``.
    """
    xs = step * np.arange(1, int(round(limit / step)) + 1)
    over = np.asarray(infid_on_grid(xs)) > tol
    if not over.any():
        return math.inf
    k = int(np.argmax(over))
    lo = xs[k - 1] if k > 0 else 0.0
    hi = xs[k]
    while hi - lo > bisect_width:
        mid = 0.5 * (lo + hi)
        if infid_on_grid(np.array([mid]))[0] > tol:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def threshold_epsilon(
    seq: PulseSequence, target_angle: float, tol: float = DEFAULT_TOL
) -> float:
    """Largest eps with 1 - F(g) <= tol against the target for all |g| <= eps.

    Scans outward from g = 0 on both sides and returns the nearer
    first crossing; ``inf`` means no crossing within |g| <= 1.
    """
    angles, phases = seq.angles, seq.phases
    ref = _ref_components(target_angle)
    at_zero = float(_kernels.infidelity_grid(angles, phases, np.array([0.0]), ref)[0])
    if at_zero > 1e-10:
        raise ValueError(
            f"sequence does not implement the target at g=0 (infidelity {at_zero:.3e})"
        )
    crossings = [
        first_tolerance_crossing(
            lambda m, s=side: _kernels.infidelity_grid(angles, phases, s * m, ref), tol
        )
        for side in (1.0, -1.0)
    ]
    return min(crossings)


def threshold_delta(seq: PulseSequence, tol: float = DEFAULT_TOL) -> float:
    """Largest coupling fraction delta with 1 - F <= tol against the identity.

    Sweeps lambda = 1 + g upward from 0 (i.e. g upward from -1); ``inf``
    means no crossing for lambda <= 1.
    """
    angles, phases = seq.angles, seq.phases
    ref = IDENTITY.as_array()
    return first_tolerance_crossing(
        lambda lam: _kernels.infidelity_grid(angles, phases, lam - 1.0, ref), tol
    )


def solve_thresholds(
    theta: float, tol: float = DEFAULT_TOL, sign: int = 1
) -> list[ThresholdReport]:
    """epsilon/delta for all four families at the given target angle."""
    reports = []
    for family in (Family.SIMPLE, Family.BB1, Family.NB1, Family.PB1):
        seq = build_family(family, theta, sign)
        reports.append(
            ThresholdReport(
                family=family,
                theta=theta,
                tol=tol,
                epsilon=threshold_epsilon(seq, theta, tol),
                delta=threshold_delta(seq, tol),
            )
        )
    return reports


# ---------------------------------------------------------------------------
# series-cancellation diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrderEstimate:
    """Richardson-refined derivative estimates of one order, per component."""

    order: int
    values: np.ndarray       # signed estimates for (w-w0, x-x0, y, z)
    truncation: np.ndarray   # Richardson error estimate per component
    noise_floor: float       # roundoff/calibration floor for this order

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def significant(self) -> np.ndarray:
        """Components whose estimate rises above both floor and truncation."""
        gate = np.maximum(self.noise_floor, _TRUNC_SAFETY * self.truncation)
        return self.magnitudes > gate

    @property
    def below_floor(self) -> bool:
        return bool(np.all(self.magnitudes < self.noise_floor))


@dataclass(frozen=True)
class ExpansionReport:
    family: Family
    target_angle: float
    point: float
    step: float
    orders: tuple[OrderEstimate, ...]


def _error_samples(seq: PulseSequence, target: np.ndarray, point: float, offsets) -> dict:
    gs = point + np.asarray(offsets, dtype=float)
    q = _kernels.net_quaternion_grid(seq.angles, seq.phases, gs)
    return {off: q[i] - target for i, off in enumerate(offsets)}


def _fd_estimate(f: dict, order: int, s: float) -> np.ndarray:
    if order == 1:
        return (f[s] - f[-s]) / (2.0 * s)
    if order == 2:
        return (f[s] - 2.0 * f[0.0] + f[-s]) / s**2
    if order == 3:
        return (f[2.0 * s] - 2.0 * f[s] + 2.0 * f[-s] - f[-2.0 * s]) / (2.0 * s**3)
    return (f[2.0 * s] - 4.0 * f[s] + 6.0 * f[0.0] - 4.0 * f[-s] + f[-2.0 * s]) / s**4


def _richardson(f: dict, order: int, h: float) -> tuple[np.ndarray, np.ndarray]:
    coarse = _fd_estimate(f, order, h)
    fine = _fd_estimate(f, order, 0.5 * h)
    return (4.0 * fine - coarse) / 3.0, np.abs(fine - coarse) / 3.0


def _simple_pulse_derivative(theta: float, point: float, order: int) -> np.ndarray:
    """Closed-form derivatives of the single-pulse error components.

    The single x-pulse has net quaternion {cos(theta*(1+g)/2),
    sin(theta*(1+g)/2), 0, 0}, so each derivative is elementary; this is
    the calibration target for the finite-difference machinery.
    """
    half = 0.5 * theta
    base = half * (1.0 + point)
    shift = 0.5 * order * math.pi
    dw = half**order * math.cos(base + shift)
    dx = half**order * math.sin(base + shift)
    return np.array([dw, dx, 0.0, 0.0])


def _calibration_error(theta: float, point: float, order: int, h: float) -> float:
    simple = build_simple(theta)
    target = _ref_components(theta * (1.0 + point))
    offsets = (-2.0 * h, -h, -0.5 * h, 0.0, 0.5 * h, h, 2.0 * h)
    f = _error_samples(simple, target, point, offsets)
    est, _ = _richardson(f, order, h)
    return float(np.max(np.abs(est - _simple_pulse_derivative(theta, point, order))))


def error_expansion(
    seq: PulseSequence,
    ideal_angle: float,
    point: float,
    max_order: int = 2,
    step: float = FD_STEP,
) -> ExpansionReport:
    """Derivatives of the quaternion error components at g = point.

    The error components are (w - w_ideal, x - x_ideal, y, z) of the net
    quaternion relative to the ideal rotation (``ideal_angle`` about x at
    point 0, the identity at point -1).  Orders above 4 are refused: the
    remaining roundoff amplification at step ``h/2`` makes them
    meaningless at this step size.
    """
    point = float(point)
    if point not in (0.0, -1.0):
        raise ValueError(f"expansion point must be 0 or -1, got {point!r}")
    if not isinstance(max_order, int) or not 1 <= max_order <= 4:
        raise ValueError(f"max_order must be an integer in 1..4, got {max_order!r}")
    if not step > 0.0:
        raise ValueError(f"step must be positive, got {step!r}")

    target = IDENTITY.as_array() if point == -1.0 else _ref_components(ideal_angle)
    offsets = (-2.0 * step, -step, -0.5 * step, 0.0, 0.5 * step, step, 2.0 * step)
    f = _error_samples(seq, target, point, offsets)

    theta_cal = seq.target_angle if 0.0 < seq.target_angle <= 2.0 * math.pi else 0.5 * math.pi
    orders = []
    for order in range(1, max_order + 1):
        values, truncation = _richardson(f, order, step)
        floor = max(
            _ROUND_SAFETY * _EPS / (0.5 * step) ** order,
            _CAL_SAFETY * _calibration_error(theta_cal, point, order, step),
        )
        orders.append(OrderEstimate(order, values, truncation, floor))
    return ExpansionReport(seq.family, seq.target_angle, point, step, tuple(orders))


def infidelity_loglog_slope(
    seq: PulseSequence,
    vs_identity: bool,
    x_hi: float,
    decades: float = 2.0,
    samples: int = 41,
) -> float:
    """Power-law order of 1 - F near the expansion point.

    Fits log(1 - F) against log(x) over ``decades`` decades up to
    ``x_hi``, where x is |g| (against the target rotation) or the
    coupling fraction lambda (against the identity).
    """
    xs = np.logspace(math.log10(x_hi) - decades, math.log10(x_hi), samples)
    if vs_identity:
        gs, ref = xs - 1.0, IDENTITY.as_array()
    else:
        gs, ref = xs, _ref_components(seq.target_angle)
    infid = _kernels.infidelity_grid(seq.angles, seq.phases, gs, ref)
    return float(np.polyfit(np.log(xs), np.log(infid), 1)[0])


# ---------------------------------------------------------------------------
# interchange formats
# ---------------------------------------------------------------------------


def curve_csv_lines(points) -> list[str]:
    """CSV rows for a fidelity curve: header ``g,F``, 17 significant digits."""
    lines = ["g,F"]
    lines.extend(f"{p.g:.17g},{p.F:.17g}" for p in points)
    return lines


def _threshold_value(x: float):
    return ">=1" if math.isinf(x) else x


def threshold_reports_json(reports) -> str:
    """JSON array of threshold reports; no-crossing results appear as ">=1"."""
    payload = [
        {
            "family": r.family.value,
            "theta_deg": math.degrees(r.theta),
            "tol": r.tol,
            "epsilon": _threshold_value(r.epsilon),
            "delta": _threshold_value(r.delta),
        }
        for r in reports
    ]
    return json.dumps(payload, indent=2) + "\n"
