"""Grid-evaluation kernels for pulse sequences.

Everything expensive in this package reduces to: take one sequence of
(angle, phase) pulses, scale the angles by (1 + g) for many values of g,
chain the quaternion products, and compare the result to a reference
rotation.  Threshold scans evaluate tens of thousands of grid points, so
these inner loops are JIT-compiled with numba.  A pure-numpy fallback
(vectorised over the g axis) is kept for environments without numba and
can be forced with ``CPSEQ_NO_NUMBA=1``; both paths are exercised against
each other in the test suite.

Array conventions: ``angles``/``phases`` are float64 1-D arrays of equal
length listing the pulses in temporal order; ``ref`` is a length-4 float64
array (w, x, y, z) of the reference unit quaternion; results follow the g
grid.  Infidelities use the cancellation-free relative-rotation form, see
``rotor_core.quaternion_infidelity``.
"""

from __future__ import annotations

import math
import os

import numpy as np

__all__ = [
    "BACKEND",
    "net_quaternion_grid",
    "fidelity_grid",
    "infidelity_grid",
]


def _numba_disabled() -> bool:
    return os.environ.get("CPSEQ_NO_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")


# ---------------------------------------------------------------------------
# pure-numpy path: loop over the (short) pulse list, broadcast over the g grid
# ---------------------------------------------------------------------------

def _net_quaternion_grid_numpy(angles, phases, gs):
    n = gs.shape[0]
    w = np.ones(n)
    x = np.zeros(n)
    y = np.zeros(n)
    z = np.zeros(n)
    for k in range(angles.shape[0]):
        half = 0.5 * angles[k] * (1.0 + gs)
        pw = np.cos(half)
        s = np.sin(half)
        px = s * math.cos(phases[k])
        py = s * math.sin(phases[k])
        # left-multiply by the pulse quaternion (pz = 0)
        w, x, y, z = (
            pw * w - px * x - py * y,
            pw * x + px * w + py * z,
            pw * y + py * w - px * z,
            pw * z + px * y - py * x,
        )
    return np.stack([w, x, y, z], axis=1)


def _infidelity_grid_numpy(angles, phases, gs, ref):
    q = _net_quaternion_grid_numpy(angles, phases, gs)
    rw, rx, ry, rz = ref
    # relative rotation q * conj(ref)
    dw = q[:, 0] * rw + q[:, 1] * rx + q[:, 2] * ry + q[:, 3] * rz
    dx = -q[:, 0] * rx + q[:, 1] * rw - q[:, 2] * rz + q[:, 3] * ry
    dy = -q[:, 0] * ry + q[:, 2] * rw - q[:, 3] * rx + q[:, 1] * rz
    dz = -q[:, 0] * rz + q[:, 3] * rw - q[:, 1] * ry + q[:, 2] * rx
    return (dx * dx + dy * dy + dz * dz) / (1.0 + np.abs(dw))


# ---------------------------------------------------------------------------
# numba path: scalar loops over the g grid
# ---------------------------------------------------------------------------

if not _numba_disabled():
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a hard dependency
        _HAVE_NUMBA = False
else:
    _HAVE_NUMBA = False

if _HAVE_NUMBA:

    @njit(cache=True)
    def _net_quaternion_grid_numba(angles, phases, gs):  # pragma: no cover - jitted
        n = gs.shape[0]
        m = angles.shape[0]
        out = np.empty((n, 4))
        for i in range(n):
            scale = 1.0 + gs[i]
            w = 1.0
            x = 0.0
            y = 0.0
            z = 0.0
            for k in range(m):
                half = 0.5 * angles[k] * scale
                pw = math.cos(half)
                s = math.sin(half)
                px = s * math.cos(phases[k])
                py = s * math.sin(phases[k])
                nw = pw * w - px * x - py * y
                nx = pw * x + px * w + py * z
                ny = pw * y + py * w - px * z
                nz = pw * z + px * y - py * x
                w, x, y, z = nw, nx, ny, nz
            out[i, 0] = w
            out[i, 1] = x
            out[i, 2] = y
            out[i, 3] = z
        return out

    @njit(cache=True)
    def _infidelity_grid_numba(angles, phases, gs, ref):  # pragma: no cover - jitted
        q = _net_quaternion_grid_numba(angles, phases, gs)
        n = gs.shape[0]
        out = np.empty(n)
        rw = ref[0]
        rx = ref[1]
        ry = ref[2]
        rz = ref[3]
        for i in range(n):
            dw = q[i, 0] * rw + q[i, 1] * rx + q[i, 2] * ry + q[i, 3] * rz
            dx = -q[i, 0] * rx + q[i, 1] * rw - q[i, 2] * rz + q[i, 3] * ry
            dy = -q[i, 0] * ry + q[i, 2] * rw - q[i, 3] * rx + q[i, 1] * rz
            dz = -q[i, 0] * rz + q[i, 3] * rw - q[i, 1] * ry + q[i, 2] * rx
            out[i] = (dx * dx + dy * dy + dz * dz) / (1.0 + abs(dw))
        return out

    BACKEND = "numba"
    _net_quaternion_grid = _net_quaternion_grid_numba
    _infidelity_grid = _infidelity_grid_numba
else:
    BACKEND = "numpy"
    _net_quaternion_grid = _net_quaternion_grid_numpy
    _infidelity_grid = _infidelity_grid_numpy


def _as_grid_args(angles, phases, gs):
    angles = np.ascontiguousarray(angles, dtype=np.float64)
    phases = np.ascontiguousarray(phases, dtype=np.float64)
    gs = np.ascontiguousarray(gs, dtype=np.float64)
    if angles.shape != phases.shape or angles.ndim != 1:
        raise ValueError("angles and phases must be 1-D arrays of equal length")
    return angles, phases, gs


def net_quaternion_grid(angles, phases, gs) -> np.ndarray:
    """Net quaternions of the errored sequence, one row (w, x, y, z) per g."""
    angles, phases, gs = _as_grid_args(angles, phases, gs)
    return _net_quaternion_grid(angles, phases, gs)


def fidelity_grid(angles, phases, gs, ref) -> np.ndarray:
    """Fidelity |q(g) . ref| over the g grid."""
    angles, phases, gs = _as_grid_args(angles, phases, gs)
    q = _net_quaternion_grid(angles, phases, gs)
    return np.minimum(np.abs(q @ np.asarray(ref, dtype=np.float64)), 1.0)


def infidelity_grid(angles, phases, gs, ref) -> np.ndarray:
    """Cancellation-free 1 - |q(g) . ref| over the g grid."""
    angles, phases, gs = _as_grid_args(angles, phases, gs)
    ref = np.ascontiguousarray(ref, dtype=np.float64)
    return _infidelity_grid(angles, phases, gs, ref)
