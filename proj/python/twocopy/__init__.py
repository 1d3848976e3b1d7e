"""Two-copy weak-value entanglement detection for two-qubit states."""

from ._core import (
    ConfigError,
    DimensionError,
    InvalidStateError,
    NoSignalError,
    State,
    TwoCopyError,
    bell_state,
    bound_check,
    circuit_unitary,
    coupling_unitary,
    det_ptb,
    det_ptb_expansion,
    detect,
    detect_pure,
    entanglement_estimate,
    estimate_weak_values,
    exact_weak_value,
    hamiltonian,
    local_hamiltonian,
    maximally_mixed,
    negativity,
    partial_transpose_b,
    postselection_probability,
    ppt_oracle,
    random_mixed,
    random_pure,
    tomography,
    trace_distance,
    validate,
    verify_circuit,
    weak_values,
    werner,
)

__all__ = [name for name in dir() if not name.startswith("_")]
