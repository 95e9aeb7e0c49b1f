"""Gate-killing witness construction and the certificates it produces.

Working backward from the output layer, the construction maintains a
committed wire set K with a witness state psi over it, such that applying the
already-processed layer suffix to (anything on the rest R) tensor psi always
leaves the target wire reading |0>. Z-gates that straddle K and R are
*killed*: one of their wires is pinned to |0> (a freshly recruited R wire, or
in improved mode a wire pinned on the previous step), which makes the gate
act as the identity, so it can be dropped without changing the suffix's
action on these states.

If, after all layers, some input wire is still outside K, flipping it cannot
move the target reading away from 0, while the parity operator's reading
always flips, so the circuit provably does not compute parity. The
serialized :class:`KillCertificate` lets anyone replay that argument with two
plain simulations.

Layer bookkeeping uses application-order indices (``layers[0]`` first);
the step counter k walks from the output layer (k = 1) toward the input
layer (k = depth).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from ._version import __version__
from .circuits import (
    Circuit,
    Layer,
    MeasurementSpec,
    SingleQubit,
    ZGate,
    circuit_sha256,
    is_single_qubit_z_circuit,
)
from .reference import OpKind, ReferenceOp, conjugate_parity_to_fanout
from .sim import PartialState, adjoint_gate, apply_gate, read_target, run

READING_TOL = 1e-9
STATE_TOL = 1e-10

Mode = str  # "basic" | "improved"


class InvariantError(RuntimeError):
    """An internal invariant of the construction was breached."""


@dataclass(frozen=True)
class KillRecord:
    """One killed Z-gate: where it sits, and which pinned-|0> wire justifies
    treating it as the identity."""

    layer: int
    gate_index: int
    wires: tuple[int, ...]
    pinned_wire: int
    via: str  # "base-zero" | "fresh-zero" | "recruited"


@dataclass(frozen=True)
class KillHistoryEntry:
    k: int
    committed: tuple[int, ...]
    fresh: tuple[int, ...]
    killed: tuple[KillRecord, ...]


@dataclass(frozen=True)
class KillState:
    """Progress of the construction after processing k layers from the output."""

    mode: Mode
    k: int
    committed: tuple[int, ...]
    rest: tuple[int, ...]
    psi: PartialState
    fresh_zero: frozenset[int]
    killed: tuple[KillRecord, ...]
    history: tuple[KillHistoryEntry, ...]


def committed_bound(mode: Mode, a: int, k: int) -> int:
    """Hard cap asserted on |K| after step k."""
    if mode == "basic":
        return (a + 1) * 2 ** k
    return (a + 1) * 2 ** math.ceil(k / 2)


def _check_mode(mode: Mode) -> None:
    if mode not in ("basic", "improved"):
        raise ValueError(f"mode must be 'basic' or 'improved', got {mode!r}")


def _assert_bound(mode: Mode, c: Circuit, k: int, committed: set[int]) -> None:
    bound = committed_bound(mode, c.a, k)
    if len(committed) > bound:
        raise InvariantError(
            f"committed set has {len(committed)} wires after step {k}, exceeding the"
            f" {mode}-mode cap (a+1)*2^{'k' if mode == 'basic' else 'ceil(k/2)'}"
            f" = {bound}"
        )


def kill_base(c: Circuit, mode: Mode) -> KillState:
    """Process the output layer: commit the target and every ancilla, choose
    each wire's one-qubit witness factor, and kill Z-gates feeding them."""
    _check_mode(mode)
    if not is_single_qubit_z_circuit(c):
        raise ValueError(
            "construction needs a single-qubit + Z circuit; rewrite Toffoli/Cnot first"
        )
    if c.depth() < 1:
        raise ValueError("construction needs depth >= 1")
    layer_index = c.depth() - 1
    output_layer = c.layers[layer_index]
    committed = {c.target} | set(range(c.n, c.wires))
    feeding: dict[int, tuple[int, object]] = {}
    for j, g in enumerate(output_layer.gates):
        for w in g.support():
            feeding[w] = (j, g)

    factors: dict[int, np.ndarray] = {}
    fresh: set[int] = set()
    killed: list[KillRecord] = []
    killed_gate_indices: set[int] = set()
    zero = np.array([1.0, 0.0], dtype=complex)
    for w in sorted(committed):
        fed = feeding.get(w)
        if fed is None:
            factors[w] = zero
        elif isinstance(fed[1], SingleQubit):
            factors[w] = fed[1].u.conj().T @ zero
        else:  # Z-gate: pin the wire and kill the gate
            factors[w] = zero
            fresh.add(w)
            j = fed[0]
            if j not in killed_gate_indices:
                killed_gate_indices.add(j)
                gate = fed[1]
                assert isinstance(gate, ZGate)
                killed.append(
                    KillRecord(
                        layer=layer_index,
                        gate_index=j,
                        wires=gate.wires,
                        pinned_wire=w,
                        via="base-zero",
                    )
                )

    psi: PartialState | None = None
    for w in sorted(committed):
        single = PartialState((w,), factors[w])
        psi = single if psi is None else psi.tensor(single)
    assert psi is not None
    _assert_bound(mode, c, 1, committed)
    entry = KillHistoryEntry(
        k=1,
        committed=tuple(sorted(committed)),
        fresh=tuple(sorted(fresh)),
        killed=tuple(killed),
    )
    return KillState(
        mode=mode,
        k=1,
        committed=tuple(sorted(committed)),
        rest=tuple(w for w in range(c.wires) if w not in committed),
        psi=psi,
        fresh_zero=frozenset(fresh),
        killed=tuple(killed),
        history=(entry,),
    )


def kill_step(s: KillState, c: Circuit) -> KillState:
    """Advance one layer toward the input: kill straddling Z-gates (for free
    via last step's pinned wires in improved mode, else by recruiting one of
    their uncommitted wires into K pinned to |0>), then pull the witness back
    through the layer's surviving committed-side gates."""
    if s.k >= c.depth():
        raise ValueError(f"all {c.depth()} layers already processed")
    layer_index = c.depth() - 1 - s.k
    layer = c.layers[layer_index]
    committed = set(s.committed)
    rest = set(s.rest)

    new_killed: list[KillRecord] = []
    killed_gate_indices: set[int] = set()
    recruited: set[int] = set()

    straddlers: list[tuple[int, ZGate]] = []
    for j, g in enumerate(layer.gates):
        if isinstance(g, ZGate):
            support = g.support()
            if (support & committed) and (support & rest):
                straddlers.append((j, g))

    if s.mode == "improved":
        for j, g in straddlers:
            pinned = g.support() & s.fresh_zero
            if pinned:
                killed_gate_indices.add(j)
                new_killed.append(
                    KillRecord(
                        layer=layer_index,
                        gate_index=j,
                        wires=g.wires,
                        pinned_wire=min(pinned),
                        via="fresh-zero",
                    )
                )

    for j, g in straddlers:
        if j in killed_gate_indices:
            continue
        candidates = sorted(g.support() & rest)
        ancilla_candidates = [w for w in candidates if w >= c.n]
        recruit = ancilla_candidates[0] if ancilla_candidates else candidates[0]
        rest.remove(recruit)
        committed.add(recruit)
        recruited.add(recruit)
        killed_gate_indices.add(j)
        new_killed.append(
            KillRecord(
                layer=layer_index,
                gate_index=j,
                wires=g.wires,
                pinned_wire=recruit,
                via="recruited",
            )
        )

    psi = s.psi
    for j, g in enumerate(layer.gates):
        if j in killed_gate_indices:
            continue
        support = g.support()
        if support & committed:
            if not support <= committed - recruited:
                raise InvariantError(
                    f"layer {layer_index}, gate {j}: unexpected committed-side overlap"
                    f" {sorted(support)} vs committed {sorted(committed)}"
                )
            psi = apply_gate(adjoint_gate(g), psi)
    psi = psi.extend_zeros(recruited)

    k = s.k + 1
    _assert_bound(s.mode, c, k, committed)
    entry = KillHistoryEntry(
        k=k,
        committed=tuple(sorted(committed)),
        fresh=tuple(sorted(recruited)),
        killed=tuple(new_killed),
    )
    return KillState(
        mode=s.mode,
        k=k,
        committed=tuple(sorted(committed)),
        rest=tuple(sorted(rest)),
        psi=psi,
        fresh_zero=frozenset(recruited),
        killed=s.killed + tuple(new_killed),
        history=s.history + (entry,),
    )


def kill_run(c: Circuit, mode: Mode) -> KillState:
    """Run the construction through every layer (k ends at depth)."""
    s = kill_base(c, mode)
    while s.k < c.depth():
        s = kill_step(s, c)
    return s


def strip_killed(c: Circuit, killed: tuple[KillRecord, ...]) -> Circuit:
    """Copy of the circuit with every killed gate removed (replaced by the
    identity its pinned wire justifies)."""
    dropped = {(r.layer, r.gate_index) for r in killed}
    layers = tuple(
        Layer(g for j, g in enumerate(layer.gates) if (i, j) not in dropped)
        for i, layer in enumerate(c.layers)
    )
    return Circuit(n=c.n, a=c.a, target=c.target, layers=layers)


@dataclass(frozen=True)
class VerifyKillResult:
    ok: bool
    trials: int
    readings: tuple[tuple[float, float], ...]  # (full-gate p1, killed-dropped p1)
    max_p1: float
    max_state_diff: float


def verify_kill(
    c: Circuit, s: KillState, trials: int = 20, seed: int = 0
) -> VerifyKillResult:
    """Check the witness the hard way: for the all-zeros basis state and
    ``trials`` random unit states over the uncommitted wires, simulate the
    processed layer suffix on (rest tensor psi) twice -- once with killed
    gates dropped, once with every gate in place -- and demand a target
    reading of at most 1e-9 and matching states from both runs."""
    rng = np.random.default_rng(seed)
    from_layer = c.depth() - s.k
    stripped = strip_killed(c, s.killed)
    m = MeasurementSpec(c.target)

    rest_states = [PartialState.zero(s.rest)] if s.rest else [None]
    for _ in range(trials):
        rest_states.append(PartialState.random(s.rest, rng) if s.rest else None)

    readings: list[tuple[float, float]] = []
    max_p1 = 0.0
    max_diff = 0.0
    ok = True
    for rest_state in rest_states:
        start = s.psi if rest_state is None else rest_state.tensor(s.psi)
        out_full = run(c, start, from_layer=from_layer)
        out_killed = run(stripped, start, from_layer=from_layer)
        p_full = read_target(out_full, m).p1
        p_killed = read_target(out_killed, m).p1
        diff = float(np.abs(out_full.amps - out_killed.amps).max())
        readings.append((p_full, p_killed))
        max_p1 = max(max_p1, p_full, p_killed)
        max_diff = max(max_diff, diff)
        if p_full > READING_TOL or p_killed > READING_TOL or diff > STATE_TOL:
            ok = False
    return VerifyKillResult(
        ok=ok,
        trials=len(rest_states),
        readings=tuple(readings),
        max_p1=max_p1,
        max_state_diff=max_diff,
    )


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KillCertificate:
    """Re-checkable record that a circuit cannot compute parity (or fanout).

    ``free_input`` is an input wire outside the final committed set; the two
    test inputs are all-zeros over the uncommitted wires and the same with
    ``free_input`` flipped, each tensored with the witness. ``readings`` are
    the circuit's target probabilities on them (both must be ~0), while
    ``reference_readings`` are the parity operator's on the same states
    (they sum to 1, so at least one is far from the circuit's).

    ``ancilla_consistency`` reports whether the witness is |0> on every
    ancilla wire. When it is false, the verdict holds only for the witness's
    state class: the clean-computation premise constrains the circuit on
    ancillae-|0> inputs only, so a disagreement reached through an
    ancillae-excited witness is flagged rather than taken as unconditional.
    """

    version: str
    circuit_sha256: str
    against: OpKind
    mode: Mode
    history: tuple[KillHistoryEntry, ...]
    psi_wires: tuple[int, ...]
    psi_amps: tuple[complex, ...]
    free_input: int | None
    readings: tuple[float, float] | None
    reference_readings: tuple[float, float] | None
    ancilla_consistency: bool
    verdict: str  # "not-parity" | "not-fanout" | "inconclusive"


def _parity_reading(state: PartialState, x_wires: tuple[int, ...], target: int) -> float:
    """Target |1>-probability the parity operator would leave on this state."""
    index = np.arange(state.amps.size)
    value = (index >> state.position(target)) & 1
    for w in x_wires:
        value ^= (index >> state.position(w)) & 1
    return float(np.sum(np.abs(state.amps[value == 1]) ** 2))


def _ancilla_consistency(psi: PartialState, c: Circuit) -> bool:
    mass = 0.0
    for w in range(c.n, c.wires):
        mass = max(mass, psi.restricted_probability(w, 1))
    return mass <= READING_TOL


def parity_certificate(
    c: Circuit, mode: Mode = "improved", against: OpKind = "parity"
) -> KillCertificate:
    """Run the construction and package the verdict. For ``against='fanout'``
    the circuit is first conjugated by Hadamard layers, and the parity
    verdict on the conjugate certifies the fanout verdict on the input."""
    analyzed = conjugate_parity_to_fanout(c) if against == "fanout" else c
    s = kill_run(analyzed, mode)
    free_inputs = [w for w in s.rest if w < analyzed.n]

    readings = None
    reference_readings = None
    free_input = None
    verdict = "inconclusive"
    if free_inputs:
        free_input = free_inputs[0]
        m = MeasurementSpec(analyzed.target)
        x_wires = tuple(w for w in range(analyzed.n) if w != analyzed.target)
        pair = []
        ref_pair = []
        for flip in (False, True):
            bits = {free_input: 1} if flip else {}
            start = PartialState.basis(s.rest, bits).tensor(s.psi)
            out = run(analyzed, start)
            p1 = read_target(out, m).p1
            if p1 > READING_TOL:
                raise InvariantError(
                    f"witness failed: target reading {p1} on "
                    f"{'flipped' if flip else 'baseline'} input"
                )
            pair.append(p1)
            ref_pair.append(_parity_reading(start, x_wires, analyzed.target))
        readings = (pair[0], pair[1])
        reference_readings = (ref_pair[0], ref_pair[1])
        verdict = "not-parity" if against == "parity" else "not-fanout"

    return KillCertificate(
        version=__version__,
        circuit_sha256=circuit_sha256(c),
        against=against,
        mode=mode,
        history=s.history,
        psi_wires=s.psi.wires,
        psi_amps=tuple(complex(v) for v in s.psi.amps),
        free_input=free_input,
        readings=readings,
        reference_readings=reference_readings,
        ancilla_consistency=_ancilla_consistency(s.psi, analyzed),
        verdict=verdict,
    )


def certificate_to_json(cert: KillCertificate) -> str:
    obj = {
        "format": "kill-certificate",
        "version": cert.version,
        "circuit_sha256": cert.circuit_sha256,
        "against": cert.against,
        "mode": cert.mode,
        "history": [
            {
                "k": e.k,
                "committed": list(e.committed),
                "fresh": list(e.fresh),
                "killed": [
                    {
                        "layer": r.layer,
                        "gate_index": r.gate_index,
                        "wires": list(r.wires),
                        "pinned_wire": r.pinned_wire,
                        "via": r.via,
                    }
                    for r in e.killed
                ],
            }
            for e in cert.history
        ],
        "witness": {
            "wires": list(cert.psi_wires),
            "amps": [[v.real, v.imag] for v in cert.psi_amps],
        },
        "free_input": cert.free_input,
        "readings": list(cert.readings) if cert.readings is not None else None,
        "reference_readings": (
            list(cert.reference_readings)
            if cert.reference_readings is not None
            else None
        ),
        "ancilla_consistency": cert.ancilla_consistency,
        "verdict": cert.verdict,
    }
    return json.dumps(obj, indent=1)


def certificate_from_json(text: str) -> KillCertificate:
    obj = json.loads(text)
    if obj.get("format") != "kill-certificate":
        raise ValueError(f"not a kill certificate: format={obj.get('format')!r}")
    history = tuple(
        KillHistoryEntry(
            k=e["k"],
            committed=tuple(e["committed"]),
            fresh=tuple(e["fresh"]),
            killed=tuple(
                KillRecord(
                    layer=r["layer"],
                    gate_index=r["gate_index"],
                    wires=tuple(r["wires"]),
                    pinned_wire=r["pinned_wire"],
                    via=r["via"],
                )
                for r in e["killed"]
            ),
        )
        for e in obj["history"]
    )
    return KillCertificate(
        version=obj["version"],
        circuit_sha256=obj["circuit_sha256"],
        against=obj["against"],
        mode=obj["mode"],
        history=history,
        psi_wires=tuple(obj["witness"]["wires"]),
        psi_amps=tuple(complex(re, im) for re, im in obj["witness"]["amps"]),
        free_input=obj["free_input"],
        readings=tuple(obj["readings"]) if obj["readings"] is not None else None,
        reference_readings=(
            tuple(obj["reference_readings"])
            if obj["reference_readings"] is not None
            else None
        ),
        ancilla_consistency=obj["ancilla_consistency"],
        verdict=obj["verdict"],
    )


def recheck_certificate(cert: KillCertificate, c: Circuit) -> bool:
    """Independently replay a certificate against a circuit: hash, witness
    readings, and the parity-operator separation are all re-simulated."""
    if circuit_sha256(c) != cert.circuit_sha256:
        return False
    analyzed = conjugate_parity_to_fanout(c) if cert.against == "fanout" else c
    psi = PartialState(cert.psi_wires, np.array(cert.psi_amps, dtype=complex))
    if cert.verdict == "inconclusive":
        return cert.free_input is None and cert.readings is None
    if cert.free_input is None or cert.readings is None:
        return False
    rest = tuple(w for w in range(analyzed.wires) if w not in cert.psi_wires)
    if cert.free_input not in rest or cert.free_input >= analyzed.n:
        return False
    m = MeasurementSpec(analyzed.target)
    x_wires = tuple(w for w in range(analyzed.n) if w != analyzed.target)
    for i, flip in enumerate((False, True)):
        bits = {cert.free_input: 1} if flip else {}
        start = PartialState.basis(rest, bits).tensor(psi)
        p1 = read_target(run(analyzed, start), m).p1
        if p1 > READING_TOL or abs(p1 - cert.readings[i]) > READING_TOL:
            return False
        ref = _parity_reading(start, x_wires, analyzed.target)
        if cert.reference_readings is None or abs(ref - cert.reference_readings[i]) > READING_TOL:
            return False
    # The parity operator's two readings complement each other; the larger one
    # certifies disagreement with the circuit's ~0 reading on that input.
    ref0, ref1 = cert.reference_readings
    if abs(ref0 + ref1 - 1.0) > READING_TOL:
        return False
    return max(ref0, ref1) >= 0.5 - READING_TOL


def robust_check(c: Circuit, against: ReferenceOp) -> bool:
    """Clean computation on every ancilla basis setting: for each input basis
    x and ancilla basis y, the circuit must map |x>|y> to (op|x>)|y> up to a
    per-input global phase. Limited to n + a <= 10."""
    if c.wires > 10:
        raise ValueError("robust check limited to n + a <= 10")
    if c.n != against.n + 1:
        raise ValueError(
            f"circuit has {c.n} non-ancilla wires but op of arity {against.n}"
            f" needs {against.n + 1}"
        )
    wires = tuple(range(c.wires))
    dim_full = 2 ** c.wires
    for x in range(2 ** c.n):
        expected_low = against.basis_map(x)
        for y in range(2 ** c.a):
            start = x | (y << c.n)
            amps = np.zeros(dim_full, dtype=complex)
            amps[start] = 1.0
            out = run(c, PartialState(wires, amps)).amps
            expected_index = expected_low | (y << c.n)
            ref = out[expected_index]
            phase = ref / abs(ref) if abs(ref) > 1e-12 else 1.0
            expected = np.zeros(dim_full, dtype=complex)
            expected[expected_index] = phase
            if float(np.abs(out - expected).max()) > READING_TOL:
                return False
    return True
