"""qshallow: exact analysis of shallow layered quantum circuits.

The package represents circuits of single-qubit, generalized-Toffoli, Z, and
Cnot gates, simulates them exactly on arbitrary wire subsets, and turns depth
lower-bound arguments for parity and fanout into executable, re-checkable
artifacts: lightcone reports, gate-killing witness states, and certificate
files stating that a given circuit cannot compute parity or fanout. The
matching upper-bound constructions (log-depth Cnot parity, its Hadamard
conjugate for fanout) are included, along with a brute-force verifier that
cross-checks everything at small sizes.
"""

from ._version import __version__
from .circuits import (
    HADAMARD,
    PAULI_X,
    PAULI_Z,
    Circuit,
    CircuitFormatError,
    Cnot,
    Gate,
    Layer,
    MeasurementSpec,
    SingleQubit,
    Toffoli,
    ZGate,
    circuit_sha256,
    circuits_equal,
    is_permutation_circuit,
    is_single_qubit_z_circuit,
    parse_circuit,
    rewrite_toffoli_to_z,
    serialize_circuit,
    validate,
)
from .sim import (
    CoverageError,
    PartialState,
    TargetReading,
    apply_gate,
    apply_layer,
    dense_operator,
    full_input_state,
    read_target,
    run,
    states_allclose,
)
from .reference import (
    ReferenceOp,
    TradeoffBound,
    apply_reference,
    build_parity_logdepth,
    conjugate_parity_to_fanout,
    parity_capacity,
    parity_logdepth_depth,
    reference_dense,
    tradeoff_bound,
)
from .lightcone import (
    DepthBoundVerdict,
    LightconePair,
    LightconeReport,
    check_depth_bound,
    lightcone,
    lightcone_counterexample,
)
from .adversary import (
    InvariantError,
    KillCertificate,
    KillHistoryEntry,
    KillRecord,
    KillState,
    VerifyKillResult,
    certificate_from_json,
    certificate_to_json,
    committed_bound,
    kill_base,
    kill_run,
    kill_step,
    parity_certificate,
    recheck_certificate,
    robust_check,
    strip_killed,
    verify_kill,
)
from .verify import VerifyResult, sensitivity_scan, verify_clean
from .randcirc import random_bounded_arity_circuit, random_single_qubit_z_circuit

__all__ = [
    "__version__",
    "HADAMARD",
    "PAULI_X",
    "PAULI_Z",
    "Circuit",
    "CircuitFormatError",
    "Cnot",
    "CoverageError",
    "DepthBoundVerdict",
    "Gate",
    "InvariantError",
    "KillCertificate",
    "KillHistoryEntry",
    "KillRecord",
    "KillState",
    "Layer",
    "LightconePair",
    "LightconeReport",
    "MeasurementSpec",
    "PartialState",
    "ReferenceOp",
    "SingleQubit",
    "TargetReading",
    "Toffoli",
    "TradeoffBound",
    "VerifyKillResult",
    "VerifyResult",
    "ZGate",
    "apply_gate",
    "apply_layer",
    "apply_reference",
    "build_parity_logdepth",
    "certificate_from_json",
    "certificate_to_json",
    "check_depth_bound",
    "circuit_sha256",
    "circuits_equal",
    "committed_bound",
    "conjugate_parity_to_fanout",
    "dense_operator",
    "full_input_state",
    "is_permutation_circuit",
    "is_single_qubit_z_circuit",
    "kill_base",
    "kill_run",
    "kill_step",
    "lightcone",
    "lightcone_counterexample",
    "parity_capacity",
    "parity_certificate",
    "parity_logdepth_depth",
    "parse_circuit",
    "random_bounded_arity_circuit",
    "random_single_qubit_z_circuit",
    "read_target",
    "recheck_certificate",
    "reference_dense",
    "rewrite_toffoli_to_z",
    "robust_check",
    "run",
    "sensitivity_scan",
    "serialize_circuit",
    "states_allclose",
    "strip_killed",
    "tradeoff_bound",
    "validate",
    "verify_clean",
    "verify_kill",
]
