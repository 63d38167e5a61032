"""Quaternion algebra against the 2x2 matrix-exponential channel."""

import math

import numpy as np
import pytest

from cpseq.rotor_core import (
    IDENTITY,
    Quaternion,
    is_unitary,
    pulse_unitary,
    quat_from_pulse,
    quat_multiply,
    quaternion_fidelity,
    quaternion_infidelity,
    su2_matrix,
    trace_fidelity,
)

TOL = 1e-12


def random_pulses(rng, n):
    angles = rng.uniform(-4.0 * math.pi, 4.0 * math.pi, n)
    phases = rng.uniform(-math.pi, math.pi, n)
    return angles, phases


def test_zero_rotation_is_identity_for_any_phase():
    q = quat_from_pulse(0.0, 0.7)
    assert (q.w, q.x, q.y, q.z) == (1.0, 0.0, 0.0, 0.0)


def test_pi_pulse_about_x():
    q = quat_from_pulse(math.pi, 0.0)
    assert abs(q.w) < TOL
    assert abs(q.x - 1.0) < TOL
    assert q.y == 0.0 and q.z == 0.0


def test_quarter_turn_about_y():
    q = quat_from_pulse(math.pi / 2, math.pi / 2)
    half = math.sqrt(2.0) / 2.0
    assert abs(q.w - half) < TOL
    assert abs(q.y - half) < TOL
    assert abs(q.x) < TOL and q.z == 0.0


def test_pulse_quaternion_matches_expm_channel():
    rng = np.random.default_rng(7)
    for angle, phase in zip(*random_pulses(rng, 50)):
        u_quat = su2_matrix(quat_from_pulse(angle, phase))
        u_expm = pulse_unitary(angle, phase)
        assert np.max(np.abs(u_quat - u_expm)) < TOL


def test_multiply_identity_element():
    q = quat_from_pulse(1.1, 0.3)
    for prod in (quat_multiply(q, IDENTITY), quat_multiply(IDENTITY, q)):
        assert quaternion_fidelity(prod, q) >= 1.0 - TOL


def test_full_rotation_is_minus_identity():
    q180 = quat_from_pulse(math.pi, 0.0)
    full = quat_multiply(q180, q180)
    assert abs(full.w + 1.0) < TOL
    assert abs(full.x) < TOL and abs(full.y) < TOL and abs(full.z) < TOL
    assert quaternion_fidelity(full, IDENTITY) >= 1.0 - TOL


def test_composition_matches_matrix_product_oracle():
    rng = np.random.default_rng(42)
    angles, phases = random_pulses(rng, 2000)
    for i in range(0, 2000, 2):
        a = quat_from_pulse(angles[i], phases[i])
        b = quat_from_pulse(angles[i + 1], phases[i + 1])
        ua = pulse_unitary(angles[i], phases[i])
        ub = pulse_unitary(angles[i + 1], phases[i + 1])
        # same-order convention: left factor acts later
        assert trace_fidelity(su2_matrix(quat_multiply(a, b)), ua @ ub) >= 1.0 - TOL
        assert abs(quaternion_fidelity(a, b) - trace_fidelity(ua, ub)) < TOL


def test_multiply_is_associative():
    rng = np.random.default_rng(3)
    for _ in range(200):
        qs = [quat_from_pulse(a, p) for a, p in zip(*random_pulses(rng, 3))]
        left = quat_multiply(quat_multiply(qs[0], qs[1]), qs[2])
        right = quat_multiply(qs[0], quat_multiply(qs[1], qs[2]))
        assert quaternion_fidelity(left, right) >= 1.0 - TOL


def test_pulse_times_inverse_is_identity_up_to_sign():
    rng = np.random.default_rng(11)
    for angle, phase in zip(*random_pulses(rng, 100)):
        prod = quat_multiply(quat_from_pulse(angle, phase), quat_from_pulse(-angle, phase))
        assert quaternion_fidelity(prod, IDENTITY) >= 1.0 - TOL


def test_fidelity_examples():
    q = quat_from_pulse(0.8, 1.2)
    assert quaternion_fidelity(q, q) == 1.0
    minus_q = Quaternion(-q.w, -q.x, -q.y, -q.z)
    assert quaternion_fidelity(q, minus_q) == 1.0
    q90 = quat_from_pulse(math.pi / 2, 0.0)
    assert abs(quaternion_fidelity(q90, IDENTITY) - math.cos(math.pi / 4)) < TOL
    assert abs(
        quaternion_fidelity(q90, IDENTITY)
        - trace_fidelity(su2_matrix(q90), np.eye(2, dtype=complex))
    ) < TOL


def test_infidelity_matches_direct_form_at_moderate_separation():
    rng = np.random.default_rng(5)
    for angle, phase in zip(*random_pulses(rng, 50)):
        a = quat_from_pulse(angle, phase)
        b = quat_from_pulse(angle + 0.3, phase - 0.1)
        direct = 1.0 - quaternion_fidelity(a, b)
        assert abs(quaternion_infidelity(a, b) - direct) < 1e-14


def test_infidelity_resolves_tiny_separations():
    # two x rotations differing by da: 1 - F = 1 - cos(da/2) ~ da^2/8,
    # far below what 1 - |dot| can resolve
    da = 1e-7
    a = quat_from_pulse(1.0, 0.0)
    b = quat_from_pulse(1.0 + da, 0.0)
    expected = da**2 / 8.0
    got = quaternion_infidelity(a, b)
    assert got > 0.0
    assert abs(got - expected) < 1e-6 * expected


@pytest.mark.parametrize("angle,phase", [(math.nan, 0.0), (0.0, math.inf), (-math.inf, 1.0)])
def test_non_finite_pulse_rejected(angle, phase):
    with pytest.raises(ValueError):
        quat_from_pulse(angle, phase)
    with pytest.raises(ValueError):
        pulse_unitary(angle, phase)


def test_non_unit_quaternion_rejected():
    with pytest.raises(ValueError):
        Quaternion(1.0, 1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        Quaternion(math.nan, 0.0, 0.0, 0.0)


def test_pulse_unitary_is_unitary():
    rng = np.random.default_rng(9)
    for angle, phase in zip(*random_pulses(rng, 20)):
        assert is_unitary(pulse_unitary(angle, phase))
