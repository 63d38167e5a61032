"""Composite rotation sequences, systematic-error analysis, and Ising
gate schedule compilation."""

from .rotor_core import (
    IDENTITY,
    Quaternion,
    quat_from_pulse,
    quat_multiply,
    quaternion_fidelity,
    quaternion_infidelity,
)
from .sequences import (
    Family,
    PulseElement,
    PulseSequence,
    apply_error,
    build_bb1,
    build_family,
    build_nb1,
    build_pb1,
    build_simple,
    custom_sequence,
    net_quaternion,
)
from .analysis import (
    ExpansionReport,
    ThresholdReport,
    error_expansion,
    infidelity_curve,
    solve_thresholds,
    threshold_delta,
    threshold_epsilon,
)
from .ising_gate import (
    FreeEvolution,
    IsingSchedule,
    YPulse,
    compile_ising,
    ideal_ising_gate,
    ising_evolution,
    propagator_fidelity,
    schedule_propagator,
    y_pulse_propagator,
)

__version__ = "0.1.0"
