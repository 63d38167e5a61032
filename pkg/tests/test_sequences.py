"""Sequence builders, the error model, and net-rotation closed forms."""

import math

import numpy as np
import pytest

from cpseq.rotor_core import IDENTITY, quat_from_pulse, quaternion_fidelity
from cpseq.sequences import (
    Family,
    PulseElement,
    apply_error,
    build_bb1,
    build_family,
    build_nb1,
    build_pb1,
    build_simple,
    coupling_fraction,
    custom_sequence,
    fractional_error,
    net_quaternion,
    normalize_phase,
)

TOL = 1e-12
THETA = math.pi / 2

ALL_BUILDERS = [build_simple, build_bb1, build_nb1, build_pb1]
CORRECTED_BUILDERS = [build_bb1, build_nb1, build_pb1]


def test_simple_structure():
    seq = build_simple(THETA)
    assert seq.family is Family.SIMPLE
    assert seq.elements == (PulseElement(THETA, 0.0),)


def test_bb1_structure():
    seq = build_bb1(THETA)
    p1 = math.acos(-THETA / (4.0 * math.pi))
    assert abs(math.degrees(p1) - 97.18) < 0.01
    angles = [el.angle for el in seq.elements]
    phases = [el.phase for el in seq.elements]
    assert angles == [THETA / 2, math.pi, 2 * math.pi, math.pi, THETA / 2]
    assert phases == [0.0, p1, 3.0 * p1, p1, 0.0]


def test_nb1_structure():
    seq = build_nb1(THETA)
    p1 = math.acos(-THETA / (4.0 * math.pi))
    phases = [el.phase for el in seq.elements]
    assert phases == [0.0, p1, -p1, p1, 0.0]
    # same correction angles as bb1, only the middle phase flips
    assert [el.angle for el in seq.elements] == [el.angle for el in build_bb1(THETA).elements]


def test_pb1_structure():
    seq = build_pb1(THETA)
    p1 = math.acos(-THETA / (8.0 * math.pi))
    assert abs(math.degrees(p1) - 93.6) < 0.05
    angles = [el.angle for el in seq.elements]
    phases = [el.phase for el in seq.elements]
    assert angles == [THETA / 2, 2 * math.pi, 4 * math.pi, 2 * math.pi, THETA / 2]
    assert phases == [0.0, p1, -p1, p1, 0.0]


@pytest.mark.parametrize("build,extra", [
    (build_simple, 0.0),
    (build_bb1, 4.0 * math.pi),
    (build_nb1, 4.0 * math.pi),
    (build_pb1, 8.0 * math.pi),
])
def test_total_angle_budget(build, extra):
    for theta in (0.3, THETA, math.pi, 2.0 * math.pi):
        seq = build(theta) if build is build_simple else build(theta, 1)
        assert abs(seq.total_angle - (theta + extra)) < TOL


@pytest.mark.parametrize("build", CORRECTED_BUILDERS)
def test_corrected_sequences_are_time_symmetric(build):
    angles = [el.angle for el in build(THETA).elements]
    assert angles == angles[::-1]


@pytest.mark.parametrize("build", ALL_BUILDERS)
@pytest.mark.parametrize("theta", [math.radians(30), math.radians(90), math.radians(180)])
def test_do_nothing_without_errors(build, theta):
    seq = build(theta)
    ideal = quat_from_pulse(theta, 0.0)
    assert quaternion_fidelity(net_quaternion(seq, 0.0), ideal) >= 1.0 - TOL


@pytest.mark.parametrize("build", ALL_BUILDERS)
def test_vanishing_rotation_is_exactly_identity(build):
    q = net_quaternion(build(THETA), -1.0)
    assert abs(q.w) == 1.0
    assert q.x == 0.0 and q.y == 0.0 and q.z == 0.0


def test_apply_error_scales_angles_only():
    seq = build_bb1(THETA)
    assert apply_error(seq, 0.0) == seq
    shrunk = apply_error(seq, -1.0)
    assert all(el.angle == 0.0 for el in shrunk.elements)
    assert [el.phase for el in shrunk.elements] == [el.phase for el in seq.elements]
    grown = apply_error(build_simple(THETA), 0.1)
    assert abs(math.degrees(grown.elements[0].angle) - 99.0) < 1e-10


def test_simple_pulse_closed_form():
    seq = build_simple(THETA)
    for g in np.linspace(-1.5, 0.5, 21):
        q = net_quaternion(seq, g)
        half = 0.5 * THETA * (1.0 + g)
        assert abs(q.w - math.cos(half)) < TOL
        assert abs(q.x - math.sin(half)) < TOL
        assert q.y == 0.0 and q.z == 0.0


def test_simple_pulse_closed_form_fidelities():
    seq = build_simple(THETA)
    ideal = quat_from_pulse(THETA, 0.0)
    for g in np.linspace(-2.0, 1.0, 31):
        q = net_quaternion(seq, g)
        assert abs(quaternion_fidelity(q, ideal) - abs(math.cos(0.5 * g * THETA))) < TOL
        assert abs(
            quaternion_fidelity(q, IDENTITY) - abs(math.cos(0.5 * THETA * (1.0 + g)))
        ) < TOL


@pytest.mark.parametrize("build", CORRECTED_BUILDERS)
def test_sign_branch_is_a_fidelity_symmetry(build):
    plus = build(THETA, 1)
    minus = build(THETA, -1)
    ideal = quat_from_pulse(THETA, 0.0)
    for g in np.linspace(-1.5, 0.5, 41):
        f_plus = quaternion_fidelity(net_quaternion(plus, g), ideal)
        f_minus = quaternion_fidelity(net_quaternion(minus, g), ideal)
        assert abs(f_plus - f_minus) < TOL


def test_bb1_matches_simple_at_zero_error():
    ideal = net_quaternion(build_simple(THETA), 0.0)
    assert quaternion_fidelity(net_quaternion(build_bb1(THETA), 0.0), ideal) >= 1.0 - TOL


def test_published_tolerance_edges():
    # infidelity reaches ~1e-6 right at the documented epsilon/delta values
    ideal = quat_from_pulse(THETA, 0.0)
    bb1_edge = 1.0 - quaternion_fidelity(net_quaternion(build_bb1(THETA), 0.1015), ideal)
    assert bb1_edge == pytest.approx(1e-6, rel=1e-2)
    nb1_edge = 1.0 - quaternion_fidelity(net_quaternion(build_nb1(THETA), 0.1015 - 1.0), IDENTITY)
    assert nb1_edge == pytest.approx(1e-6, rel=1e-2)
    for g in (0.0648, 0.0648 - 1.0):
        ref = ideal if g > 0 else IDENTITY
        pb1_edge = 1.0 - quaternion_fidelity(net_quaternion(build_pb1(THETA), g), ref)
        assert pb1_edge == pytest.approx(1e-6, rel=1e-2)


def test_display_phase_normalisation():
    seq = build_bb1(THETA)
    middle = seq.elements[2]
    assert middle.phase > math.pi  # stored as written: 3*phi1
    assert -math.pi < middle.display_phase <= math.pi
    assert abs(middle.display_phase - (middle.phase - 2.0 * math.pi)) < TOL
    assert normalize_phase(math.pi) == math.pi
    assert normalize_phase(-math.pi) == math.pi
    assert normalize_phase(0.0) == 0.0


def test_custom_sequence():
    seq = custom_sequence([(0.5, 0.0), (1.0, 2.0)], 0.5)
    assert seq.family is Family.CUSTOM
    assert len(seq.elements) == 2
    assert net_quaternion(seq, -1.0).w == 1.0


def test_build_family_dispatch():
    assert build_family(Family.PB1, THETA).family is Family.PB1
    with pytest.raises(ValueError):
        build_family(Family.CUSTOM, THETA)


@pytest.mark.parametrize("theta", [0.0, -1.0, 2.0 * math.pi + 1e-6, math.nan])
@pytest.mark.parametrize("build", ALL_BUILDERS)
def test_theta_domain_errors(build, theta):
    with pytest.raises(ValueError):
        build(theta)


def test_sign_domain_errors():
    with pytest.raises(ValueError):
        build_bb1(THETA, 2)
    with pytest.raises(ValueError):
        build_pb1(THETA, 0)


def test_apply_error_rejects_non_finite():
    with pytest.raises(ValueError):
        apply_error(build_simple(THETA), math.nan)


def test_coupling_fraction_roundtrip():
    assert coupling_fraction(-1.0) == 0.0
    assert coupling_fraction(0.0) == 1.0
    for g in (-0.3, 0.0, 0.2):
        assert fractional_error(coupling_fraction(g)) == pytest.approx(g, abs=1e-15)
