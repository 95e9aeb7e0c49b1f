import numpy as np
import pytest

from qshallow import (
    HADAMARD,
    Circuit,
    Cnot,
    InvariantError,
    Layer,
    MeasurementSpec,
    PartialState,
    ReferenceOp,
    SingleQubit,
    ZGate,
    apply_gate,
    build_parity_logdepth,
    certificate_from_json,
    certificate_to_json,
    committed_bound,
    kill_base,
    kill_run,
    kill_step,
    parity_certificate,
    read_target,
    recheck_certificate,
    rewrite_toffoli_to_z,
    robust_check,
    run,
    strip_killed,
    verify_clean,
    verify_kill,
)
from qshallow.randcirc import random_single_qubit_z_circuit

X = np.array([[0, 1], [1, 0]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def test_base_case_single_qubit_fed_target():
    c = Circuit(n=1, a=0, target=0, layers=(Layer([SingleQubit(0, HADAMARD)]),))
    s = kill_base(c, "improved")
    assert s.committed == (0,)
    assert s.fresh_zero == frozenset()
    # H is self-adjoint: psi = H|0> = |+>
    assert np.abs(s.psi.amps - 1 / np.sqrt(2)).max() <= 1e-12


def test_base_case_z_fed_target():
    c = Circuit(n=4, a=0, target=1, layers=(Layer([ZGate((1, 3))]),))
    s = kill_base(c, "improved")
    assert s.committed == (1,)
    assert np.array_equal(s.psi.amps, [1.0, 0.0])
    assert s.fresh_zero == {1}
    assert len(s.killed) == 1
    record = s.killed[0]
    assert record.via == "base-zero" and record.pinned_wire == 1
    # wire 3 is not recruited at the base: the pinned target already kills the gate
    assert 3 in s.rest


def test_base_case_unfed_ancillae():
    c = Circuit(n=1, a=2, target=0, layers=(Layer(()),))
    s = kill_base(c, "improved")
    assert s.committed == (0, 1, 2)
    assert np.array_equal(s.psi.amps, [1.0] + [0.0] * 7)
    assert s.fresh_zero == frozenset()


def test_base_requires_single_qubit_z_circuit():
    c = Circuit(n=2, a=0, target=1, layers=(Layer([Cnot(0, 1)]),))
    with pytest.raises(ValueError, match="rewrite"):
        kill_base(c, "improved")
    with pytest.raises(ValueError, match="depth"):
        kill_base(Circuit(n=2, a=0, target=1, layers=()), "improved")


def test_step_fresh_zero_kills_without_recruitment():
    # Layer with Z({2,5}); wire 2 committed and fresh; improved mode kills free.
    c = Circuit(
        n=6,
        a=0,
        target=2,
        layers=(Layer([ZGate((2, 5))]), Layer([ZGate((2, 0))])),
    )
    s1 = kill_base(c, "improved")  # kills Z(2,0) via pinned target, 2 fresh
    assert s1.fresh_zero == {2}
    s2 = kill_step(s1, c)
    assert s2.committed == (2,)  # no recruitment
    assert s2.killed[-1].via == "fresh-zero"
    assert 5 in s2.rest

    # Same circuit in basic mode: wire 5 is recruited and pinned.
    s1b = kill_base(c, "basic")
    s2b = kill_step(s1b, c)
    assert s2b.committed == (2, 5)
    assert s2b.killed[-1].via == "recruited"
    assert s2b.killed[-1].pinned_wire == 5
    assert np.array_equal(s2b.psi.amps, [1.0, 0.0, 0.0, 0.0])


def test_step_single_qubit_layer_no_recruitment():
    c = Circuit(
        n=2,
        a=0,
        target=1,
        layers=(Layer([SingleQubit(1, X)]), Layer([SingleQubit(1, HADAMARD)])),
    )
    s = kill_run(c, "improved")
    assert s.committed == (1,)
    # psi = X^dag H^dag |0> = X |+> = |+>
    assert np.abs(s.psi.amps - 1 / np.sqrt(2)).max() <= 1e-12


def test_hand_trace_depth_two():
    # Output H(t), deeper Z({t,1}): K_2 = {t,1}, psi = |0>_1 (x) |+>_t.
    c = Circuit(
        n=3,
        a=0,
        target=2,
        layers=(Layer([ZGate((1, 2))]), Layer([SingleQubit(2, HADAMARD)])),
    )
    s = kill_run(c, "improved")
    assert s.k == 2
    assert s.committed == (1, 2)
    expected = np.zeros(4, dtype=complex)
    expected[0b00] = 1 / np.sqrt(2)
    expected[0b10] = 1 / np.sqrt(2)  # wire 2 is bit 1
    assert np.abs(s.psi.amps - expected).max() <= 1e-12
    result = verify_kill(c, s, trials=20)
    assert result.ok


def test_recruitment_prefers_ancillae_then_least_index():
    c = Circuit(
        n=3,
        a=2,
        target=0,
        layers=(Layer([ZGate((0, 1, 2))]), Layer([SingleQubit(0, HADAMARD)])),
    )
    # Ancillae 3,4 are committed from the start; the straddling Z offers
    # input wires 1 and 2 only: least index 1 is taken.
    s = kill_run(c, "improved")
    assert s.killed[-1].pinned_wire == 1

    c2 = Circuit(
        n=2,
        a=1,
        target=0,
        layers=(Layer([ZGate((0, 1))]), Layer([SingleQubit(0, HADAMARD)])),
    )
    s2 = kill_run(c2, "improved")
    # only input wire 1 is on offer
    assert s2.killed[-1].pinned_wire == 1


def test_size_bounds_hold_on_campaign():
    rng = np.random.default_rng(0)
    for _ in range(100):
        c = random_single_qubit_z_circuit(10, 0, 4, rng)
        for mode in ("basic", "improved"):
            s = kill_base(c, mode)
            while s.k < c.depth():
                s = kill_step(s, c)
                assert len(s.committed) <= committed_bound(mode, c.a, s.k)
            assert set(s.committed) | set(s.rest) == set(range(c.wires))
            assert not set(s.committed) & set(s.rest)
            assert s.psi.wires == s.committed


def test_improved_bound_breach_raises():
    # Worst-case growth: the target meets a fresh-avoiding straddling Z-gate
    # in three consecutive layers while an earlier recruit meets another; the
    # committed set reaches 5 wires at step 4, over the improved cap of 4.
    t, a1, a2, a3, a4 = 0, 1, 2, 3, 4
    c = Circuit(
        n=6,
        a=0,
        target=t,
        layers=(
            Layer([ZGate((t, a3)), ZGate((a1, a4))]),
            Layer([ZGate((t, a2))]),
            Layer([ZGate((t, a1))]),
            Layer([SingleQubit(t, HADAMARD)]),
        ),
    )
    with pytest.raises(InvariantError, match="exceeding"):
        kill_run(c, "improved")
    # Basic mode has the room, and its witness still works.
    s = kill_run(c, "basic")
    assert len(s.committed) == 5 <= committed_bound("basic", 0, 4)
    assert verify_kill(c, s, trials=10).ok


@pytest.mark.parametrize("mode", ["basic", "improved"])
def test_verify_kill_on_random_circuits(mode):
    rng = np.random.default_rng(42)
    for i in range(20):
        c = random_single_qubit_z_circuit(9, 0, 3, rng)
        s = kill_run(c, mode)
        result = verify_kill(c, s, trials=20, seed=i)
        assert result.ok, (i, result.max_p1, result.max_state_diff)
        assert result.max_p1 <= 1e-9
        assert result.max_state_diff <= 1e-10


def test_verify_kill_depth_one_z_fed_all_ones_rest():
    # Z-gate feeding the pinned target is inert even on the all-ones rest.
    c = Circuit(n=3, a=0, target=0, layers=(Layer([ZGate((0, 1, 2))]),))
    s = kill_run(c, "improved")
    rest_state = PartialState.basis(s.rest, {w: 1 for w in s.rest})
    out = run(c, rest_state.tensor(s.psi))
    assert read_target(out, MeasurementSpec(0)).p1 == 0.0


def test_strip_killed_removes_only_killed_gates():
    c = Circuit(
        n=3,
        a=0,
        target=2,
        layers=(Layer([ZGate((1, 2)), SingleQubit(0, HADAMARD)]),),
    )
    s = kill_run(c, "improved")
    stripped = strip_killed(c, s.killed)
    assert stripped.layers[0].gates == (SingleQubit(0, HADAMARD),)


def test_witness_pullback_structure():
    # Applying a processed layer's surviving committed-side gates forward to
    # the new witness recovers the previous witness tensor |0> on recruits.
    rng = np.random.default_rng(7)
    for _ in range(15):
        c = random_single_qubit_z_circuit(8, 0, 3, rng)
        s_prev = kill_base(c, "improved")
        while s_prev.k < c.depth():
            s_next = kill_step(s_prev, c)
            layer_index = c.depth() - 1 - s_prev.k
            killed_here = {
                (r.layer, r.gate_index) for r in s_next.killed if r.layer == layer_index
            }
            forward = s_next.psi
            for j, g in enumerate(c.layers[layer_index].gates):
                if (layer_index, j) in killed_here:
                    continue
                if g.support() <= set(s_prev.committed):
                    forward = apply_gate(g, forward)
            recruited = tuple(
                w for w in s_next.committed if w not in s_prev.committed
            )
            expected = s_prev.psi.extend_zeros(recruited)
            assert forward.wires == expected.wires
            assert np.abs(forward.amps - expected.amps).max() <= 1e-10
            s_prev = s_next


# -- certificates ------------------------------------------------------------


def test_certificate_identity_circuit():
    ident = Circuit(
        n=4,
        a=0,
        target=3,
        layers=(Layer([SingleQubit(w, I2) for w in range(4)]),),
    )
    cert = parity_certificate(ident, "improved")
    assert cert.verdict == "not-parity"
    assert cert.free_input == 0
    assert cert.readings == (0.0, 0.0)
    assert cert.reference_readings == (0.0, 1.0)
    assert cert.ancilla_consistency
    assert recheck_certificate(cert, ident)


def test_certificate_true_parity_inconclusive():
    c = rewrite_toffoli_to_z(build_parity_logdepth(8))
    for mode in ("basic", "improved"):
        cert = parity_certificate(c, mode)
        assert cert.verdict == "inconclusive"
        assert cert.free_input is None
        assert recheck_certificate(cert, c)
    assert verify_clean(c, ReferenceOp("parity", 8)).ok


def test_certificate_true_fanout_inconclusive():
    # The fanout route conjugates back to the parity circuit, which defeats
    # the construction just the same.
    c = rewrite_toffoli_to_z(build_parity_logdepth(4))
    from qshallow import conjugate_parity_to_fanout

    fanout_circuit = conjugate_parity_to_fanout(c)
    cert = parity_certificate(fanout_circuit, "improved", against="fanout")
    assert cert.verdict == "inconclusive"


def test_certificate_campaign_not_parity_and_rechecks():
    rng = np.random.default_rng(0)
    for i in range(30):
        c = random_single_qubit_z_circuit(12, 0, 4, rng)
        cert = parity_certificate(c, "improved")
        assert cert.verdict == "not-parity", i
        assert cert.readings[0] <= 1e-9 and cert.readings[1] <= 1e-9
        # the parity operator's readings on the two inputs complement each other
        assert cert.reference_readings[0] + cert.reference_readings[1] == pytest.approx(
            1.0, abs=1e-9
        )
        assert max(cert.reference_readings) >= 0.5 - 1e-9
        assert recheck_certificate(cert, c)


def test_certificate_mixed_parity_witness_still_sound():
    # A target fed by H has a witness with both even and odd support: the
    # parity operator reads 1/2 on both test inputs while the circuit reads 0.
    c = Circuit(n=4, a=0, target=3, layers=(Layer([SingleQubit(3, HADAMARD)]),))
    cert = parity_certificate(c, "improved")
    assert cert.verdict == "not-parity"
    assert cert.readings == (0.0, 0.0)
    assert cert.reference_readings[0] == pytest.approx(0.5, abs=1e-12)
    assert cert.reference_readings[1] == pytest.approx(0.5, abs=1e-12)
    assert recheck_certificate(cert, c)


def test_certificate_pure_parity_witness_flips_by_one():
    ident = Circuit(
        n=3, a=0, target=2, layers=(Layer([SingleQubit(2, I2)]),)
    )
    cert = parity_certificate(ident, "improved")
    assert abs(cert.reference_readings[0] - cert.reference_readings[1]) == 1.0


def test_fanout_certificate_via_conjugation():
    rng = np.random.default_rng(9)
    c = random_single_qubit_z_circuit(12, 0, 3, rng)
    cert = parity_certificate(c, "improved", against="fanout")
    assert cert.verdict == "not-fanout"
    assert recheck_certificate(cert, c)


def test_ancilla_consistency_flag():
    # An ancilla fed by H in the output layer leaves the witness excited there.
    c = Circuit(
        n=2,
        a=1,
        target=1,
        layers=(Layer([SingleQubit(2, HADAMARD)]), Layer([SingleQubit(1, HADAMARD)])),
    )
    cert = parity_certificate(c, "improved")
    assert cert.verdict == "not-parity"
    assert not cert.ancilla_consistency

    clean = Circuit(
        n=2, a=1, target=1, layers=(Layer([SingleQubit(1, HADAMARD)]),)
    )
    assert parity_certificate(clean, "improved").ancilla_consistency


def test_certificate_json_roundtrip_byte_exact():
    rng = np.random.default_rng(4)
    c = random_single_qubit_z_circuit(10, 0, 3, rng)
    cert = parity_certificate(c, "improved")
    text = certificate_to_json(cert)
    again = certificate_from_json(text)
    assert certificate_to_json(again) == text
    assert again == cert
    assert recheck_certificate(again, c)


def test_recheck_rejects_wrong_circuit():
    rng = np.random.default_rng(11)
    c1 = random_single_qubit_z_circuit(10, 0, 3, rng)
    c2 = random_single_qubit_z_circuit(10, 0, 3, rng)
    cert = parity_certificate(c1, "improved")
    assert not recheck_certificate(cert, c2)


def test_small_committed_set_guarantees_free_input():
    # (a+1) * 2^ceil(d/2) = 4 < 12: a free input always remains.
    rng = np.random.default_rng(0)
    for _ in range(40):
        c = random_single_qubit_z_circuit(12, 0, 4, rng)
        assert committed_bound("improved", 0, 4) < 12
        cert = parity_certificate(c, "improved")
        assert cert.verdict != "inconclusive"


# -- robust computation ------------------------------------------------------


def test_robust_no_ancillae_reduces_to_basis_equality():
    assert robust_check(build_parity_logdepth(4), ReferenceOp("parity", 4))
    broken = Circuit(n=3, a=0, target=2, layers=(Layer([SingleQubit(2, X)]),))
    assert not robust_check(broken, ReferenceOp("parity", 2))


def robust_parity_through_ancilla():
    # b picks up (y ^ x0 ^ x1) and then y again, netting x0 ^ x1; the
    # ancilla returns to y whatever y was.
    return Circuit(
        n=3,
        a=1,
        target=2,
        layers=(
            Layer([Cnot(0, 3)]),
            Layer([Cnot(1, 3)]),
            Layer([Cnot(3, 2)]),
            Layer([Cnot(0, 3)]),
            Layer([Cnot(1, 3)]),
            Layer([Cnot(3, 2)]),
        ),
    )


def test_robust_parity_through_ancilla():
    c = robust_parity_through_ancilla()
    assert verify_clean(c, ReferenceOp("parity", 2)).ok
    assert robust_check(c, ReferenceOp("parity", 2))


def test_robust_fails_when_ancilla_flipped():
    base = robust_parity_through_ancilla()
    c = Circuit(
        n=3, a=1, target=2, layers=base.layers + (Layer([SingleQubit(3, X)]),)
    )
    assert not robust_check(c, ReferenceOp("parity", 2))


def test_robust_guard():
    c = Circuit(n=11, a=0, target=0, layers=())
    with pytest.raises(ValueError, match="n \\+ a <= 10"):
        robust_check(c, ReferenceOp("parity", 10))
