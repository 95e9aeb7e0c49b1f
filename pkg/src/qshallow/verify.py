"""Brute-force ground truth: exact clean-computation checking and input
sensitivity scans, used to validate constructions and certificates at desk
scale.

A circuit *cleanly computes* a reference operator when, for every basis
setting of the non-ancilla wires with all ancillae |0>, its output equals the
operator's output on those wires tensored with |0> ancillae. Comparison is
per-input up to a global phase by default (circuits of single-qubit gates
legitimately differ from their permutation targets by one); ``strict_phase``
demands literal matrix-element equality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, Cnot, MeasurementSpec, Toffoli, is_permutation_circuit
from .sim import PartialState, read_target, run
from .reference import ReferenceOp

AMPLITUDE_TOL = 1e-9
PERMUTATION_CHECK_MAX_WIRES = 16  # op arity + ancillae, bit-level path
DENSE_CHECK_MAX_WIRES = 10  # op arity + ancillae, amplitude path


@dataclass(frozen=True)
class VerifyResult:
    """Outcome of a clean-computation check."""

    ok: bool
    checked: int
    max_deviation: float
    first_failure: str | None = None


def _permutation_images(c: Circuit, inputs: np.ndarray) -> np.ndarray:
    """Route basis states (as integers, bit w = wire w) through a circuit of
    Toffoli/Cnot gates only."""
    v = inputs.copy()
    for layer in c.layers:
        for g in layer.gates:
            if isinstance(g, Cnot):
                v ^= ((v >> g.control) & 1) << g.target
            elif isinstance(g, Toffoli):
                fire = np.ones_like(v)
                for w in g.controls:
                    fire &= (v >> w) & 1
                v ^= fire << g.target
            else:  # pragma: no cover - guarded by caller
                raise TypeError(f"not a permutation gate: {type(g).__name__}")
    return v


def _verify_clean_permutation(c: Circuit, op: ReferenceOp) -> VerifyResult:
    dim = 2 ** c.n
    inputs = np.arange(dim, dtype=np.int64)  # ancilla bits (>= n) start 0
    outputs = _permutation_images(c, inputs)
    expected = np.array([op.basis_map(int(x)) for x in inputs], dtype=np.int64)
    bad = np.nonzero(outputs != expected)[0]
    if bad.size == 0:
        return VerifyResult(ok=True, checked=dim, max_deviation=0.0)
    x = int(bad[0])
    return VerifyResult(
        ok=False,
        checked=dim,
        max_deviation=1.0,
        first_failure=(
            f"input {x:0{c.n}b} (wire 0 rightmost): expected basis state"
            f" {int(expected[bad[0]]):0{c.wires}b}, observed {int(outputs[bad[0]]):0{c.wires}b}"
        ),
    )


def _verify_clean_dense(c: Circuit, op: ReferenceOp, strict_phase: bool) -> VerifyResult:
    wires = tuple(range(c.wires))
    dim_in = 2 ** c.n
    dim_full = 2 ** c.wires
    max_dev = 0.0
    first_failure = None
    ok = True
    for x in range(dim_in):
        amps = np.zeros(dim_full, dtype=complex)
        amps[x] = 1.0  # ancilla bits are the high bits and start 0
        out = run(c, PartialState(wires, amps)).amps
        expected_index = op.basis_map(x)  # ancillae expected back at 0
        if strict_phase:
            phase = 1.0
        else:
            ref = out[expected_index]
            phase = ref / abs(ref) if abs(ref) > 1e-12 else 1.0
        expected = np.zeros(dim_full, dtype=complex)
        expected[expected_index] = phase
        dev = float(np.abs(out - expected).max())
        max_dev = max(max_dev, dev)
        if dev > AMPLITUDE_TOL and ok:
            ok = False
            first_failure = (
                f"input {x:0{c.n}b} (wire 0 rightmost): expected basis state"
                f" {expected_index:0{c.wires}b}, max amplitude deviation {dev:.3e}"
            )
    return VerifyResult(
        ok=ok, checked=dim_in, max_deviation=max_dev, first_failure=first_failure
    )


def verify_clean(c: Circuit, op: ReferenceOp, strict_phase: bool = False) -> VerifyResult:
    """Check that the circuit cleanly computes the reference operator on every
    basis input (ancillae 0, and required to end at 0).

    Permutation-only circuits (Toffoli/Cnot) are routed bit-exactly and allow
    up to op.n + a = 16; general circuits are simulated amplitude-by-amplitude
    and allow up to op.n + a = 10.
    """
    if c.n != op.n + 1:
        raise ValueError(
            f"circuit has {c.n} non-ancilla wires but op of arity {op.n} needs {op.n + 1}"
        )
    if is_permutation_circuit(c):
        if op.n + c.a > PERMUTATION_CHECK_MAX_WIRES:
            raise ValueError(
                f"permutation check limited to op.n + a <= {PERMUTATION_CHECK_MAX_WIRES}"
            )
        return _verify_clean_permutation(c, op)
    if op.n + c.a > DENSE_CHECK_MAX_WIRES:
        raise ValueError(f"dense check limited to op.n + a <= {DENSE_CHECK_MAX_WIRES}")
    return _verify_clean_dense(c, op, strict_phase)


def sensitivity_scan(c: Circuit, m: MeasurementSpec) -> tuple[int, ...]:
    """Input wires that can influence the target reading: wire i is reported
    iff flipping it on some basis input (ancillae 0) moves the target's
    |1>-probability by more than 1e-9. Limited to n + a <= 10."""
    if c.wires > DENSE_CHECK_MAX_WIRES:
        raise ValueError(f"sensitivity scan limited to n + a <= {DENSE_CHECK_MAX_WIRES}")
    wires = tuple(range(c.wires))
    dim_in = 2 ** c.n
    dim_full = 2 ** c.wires
    p1 = np.empty(dim_in)
    for x in range(dim_in):
        amps = np.zeros(dim_full, dtype=complex)
        amps[x] = 1.0
        p1[x] = read_target(run(c, PartialState(wires, amps)), m).p1
    influential = []
    xs = np.arange(dim_in)
    for i in range(c.n):
        if np.abs(p1[xs] - p1[xs ^ (1 << i)]).max() > 1e-9:
            influential.append(i)
    return tuple(influential)
