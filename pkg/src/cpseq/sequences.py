"""Builders for the composite rotation families and the systematic error model.

Four families are provided.  The simple pulse is a single rotation
``theta`` about +x.  The corrected families wrap a do-nothing correction
block symmetrically between two half pulses:

    bb1:  (theta/2)_0  180_p1  360_3p1  180_p1  (theta/2)_0
    nb1:  (theta/2)_0  180_p1  360_-p1  180_p1  (theta/2)_0
    pb1:  (theta/2)_0  360_p1  720_-p1  360_p1  (theta/2)_0

with p1 = sign * arccos(-theta / (4*pi)) for bb1/nb1 and
p1 = sign * arccos(-theta / (8*pi)) for pb1.  At g = 0 the correction
block is exactly the identity, so every family implements the plain
theta rotation; the phase choices flatten the response either around
g = 0 (bb1), around g = -1 (nb1), or both at once (pb1).

The systematic error scales every rotation angle by (1 + g), where g is
the fractional error in the rotation rate (equivalently, in the coupling
constant when compiled to a two-qubit gate).  g = -1 means the rotation
vanishes entirely; the coupling fraction lambda = 1 + g is the natural
variable on that side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .rotor_core import IDENTITY, Quaternion, quat_from_pulse, quat_multiply

__all__ = [
    "Family",
    "PulseElement",
    "PulseSequence",
    "build_simple",
    "build_bb1",
    "build_nb1",
    "build_pb1",
    "custom_sequence",
    "apply_error",
    "net_quaternion",
    "coupling_fraction",
    "fractional_error",
]

TWO_PI = 2.0 * math.pi


class Family(str, Enum):
    SIMPLE = "simple"
    BB1 = "bb1"
    NB1 = "nb1"
    PB1 = "pb1"
    CUSTOM = "custom"


def normalize_phase(phase: float) -> float:
    """Map a phase angle into (-pi, pi]."""
    r = math.remainder(phase, TWO_PI)
    if r == -math.pi:
        r = math.pi
    return r


@dataclass(frozen=True)
class PulseElement:
    """One constituent rotation: nominal angle and axis phase, both radians.

    Builders emit non-negative angles and store phases exactly as written
    in the sequence definitions (bb1's middle phase 3*p1 may exceed pi);
    use :attr:`display_phase` for the (-pi, pi] form shown at interfaces.
    """

    angle: float
    phase: float

    def __post_init__(self):
        if not (math.isfinite(self.angle) and math.isfinite(self.phase)):
            raise ValueError("pulse element angle and phase must be finite")

    @property
    def display_phase(self) -> float:
        return normalize_phase(self.phase)


@dataclass(frozen=True)
class PulseSequence:
    """Ordered pulses, first element applied first in time.

    ``target_angle`` is the rotation the sequence implements when error
    free; ``phase_sign`` records which branch of the +/- phase solution
    the builder used (the fidelity response is identical for both).
    """

    elements: tuple[PulseElement, ...]
    family: Family
    target_angle: float
    phase_sign: int = 1

    @property
    def angles(self) -> np.ndarray:
        return np.array([el.angle for el in self.elements])

    @property
    def phases(self) -> np.ndarray:
        return np.array([el.phase for el in self.elements])

    @property
    def total_angle(self) -> float:
        return float(sum(el.angle for el in self.elements))


def _check_theta(theta: float) -> None:
    if not math.isfinite(theta) or not 0.0 < theta <= TWO_PI:
        raise ValueError(f"target angle must lie in (0, 2*pi], got {theta!r}")


def _check_sign(sign: int) -> None:
    if sign not in (1, -1):
        raise ValueError(f"phase sign must be +1 or -1, got {sign!r}")


def _phi1(theta: float, denominator: float, sign: int) -> float:
    arg = -theta / denominator
    if not -1.0 <= arg <= 1.0:
        raise ValueError(f"arccos argument {arg!r} outside [-1, 1]")
    return sign * math.acos(arg)


def build_simple(theta: float) -> PulseSequence:
    """A single rotation ``theta`` about +x."""
    _check_theta(theta)
    return PulseSequence((PulseElement(theta, 0.0),), Family.SIMPLE, theta)


def build_bb1(theta: float, sign: int = 1) -> PulseSequence:
    """Broadband family: flat response around g = 0."""
    _check_theta(theta)
    _check_sign(sign)
    p1 = _phi1(theta, 4.0 * math.pi, sign)
    elements = (
        PulseElement(theta / 2.0, 0.0),
        PulseElement(math.pi, p1),
        PulseElement(TWO_PI, 3.0 * p1),
        PulseElement(math.pi, p1),
        PulseElement(theta / 2.0, 0.0),
    )
    return PulseSequence(elements, Family.BB1, theta, sign)


def build_nb1(theta: float, sign: int = 1) -> PulseSequence:
    """Narrowband family: suppresses the net rotation around g = -1."""
    _check_theta(theta)
    _check_sign(sign)
    p1 = _phi1(theta, 4.0 * math.pi, sign)
    elements = (
        PulseElement(theta / 2.0, 0.0),
        PulseElement(math.pi, p1),
        PulseElement(TWO_PI, -p1),
        PulseElement(math.pi, p1),
        PulseElement(theta / 2.0, 0.0),
    )
    return PulseSequence(elements, Family.NB1, theta, sign)


def build_pb1(theta: float, sign: int = 1) -> PulseSequence:
    """Passband family: both flattenings at once, at reduced widths."""
    _check_theta(theta)
    _check_sign(sign)
    p1 = _phi1(theta, 8.0 * math.pi, sign)
    elements = (
        PulseElement(theta / 2.0, 0.0),
        PulseElement(TWO_PI, p1),
        PulseElement(2.0 * TWO_PI, -p1),
        PulseElement(TWO_PI, p1),
        PulseElement(theta / 2.0, 0.0),
    )
    return PulseSequence(elements, Family.PB1, theta, sign)


def build_family(family: Family, theta: float, sign: int = 1) -> PulseSequence:
    """Dispatch to the builder for ``family``."""
    builders = {
        Family.SIMPLE: lambda: build_simple(theta),
        Family.BB1: lambda: build_bb1(theta, sign),
        Family.NB1: lambda: build_nb1(theta, sign),
        Family.PB1: lambda: build_pb1(theta, sign),
    }
    if family not in builders:
        raise ValueError(f"no builder for family {family!r}")
    return builders[family]()


def custom_sequence(pulses, target_angle: float) -> PulseSequence:
    """Wrap user-supplied (angle, phase) pairs for the analysis tooling."""
    elements = tuple(PulseElement(float(a), float(p)) for a, p in pulses)
    return PulseSequence(elements, Family.CUSTOM, float(target_angle))


def apply_error(seq: PulseSequence, g: float) -> PulseSequence:
    """Scale every nominal angle by (1 + g); phases are untouched."""
    if not math.isfinite(g):
        raise ValueError(f"fractional error must be finite, got {g!r}")
    scale = 1.0 + g
    elements = tuple(replace(el, angle=el.angle * scale) for el in seq.elements)
    return PulseSequence(elements, seq.family, seq.target_angle, seq.phase_sign)


def net_quaternion(seq: PulseSequence, g: float = 0.0) -> Quaternion:
    """Net rotation of the errored sequence as a quaternion.

    Later pulses multiply on the left, matching the propagator product
    U_n ... U_2 U_1 for elements listed in temporal order.
    """
    q = IDENTITY
    for el in apply_error(seq, g).elements:
        q = quat_multiply(quat_from_pulse(el.angle, el.phase), q)
    return q


def coupling_fraction(g: float) -> float:
    """lambda = 1 + g: the actual coupling as a fraction of nominal."""
    return 1.0 + g


def fractional_error(lam: float) -> float:
    """Inverse of :func:`coupling_fraction`."""
    return lam - 1.0
