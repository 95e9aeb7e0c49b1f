"""Reference operators (parity, fanout) and explicit circuit constructions.

A :class:`ReferenceOp` of arity n acts on wires 0..n: wires 0..n-1 are the
fanned/summed bits and wire n is the distinguished bit b. On basis states:

- parity: b ^= x_0 ^ ... ^ x_{n-1}, the x wires unchanged;
- fanout: x_i ^= b for every i, b unchanged.

The two are conjugate via a Hadamard on every wire, which
:func:`conjugate_parity_to_fanout` realizes as a depth +2 circuit transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .circuits import HADAMARD, Circuit, Cnot, Layer, SingleQubit
from .sim import PartialState

OpKind = Literal["parity", "fanout"]


@dataclass(frozen=True)
class ReferenceOp:
    """Exact basis-permutation operator on wires 0..n (wire n is b)."""

    kind: OpKind
    n: int

    def __post_init__(self) -> None:
        if self.kind not in ("parity", "fanout"):
            raise ValueError(f"unknown reference op kind {self.kind!r}")
        if self.n < 1:
            raise ValueError(f"reference op arity must be >= 1, got {self.n}")

    @property
    def wires(self) -> tuple[int, ...]:
        return tuple(range(self.n + 1))

    def basis_map(self, index: int) -> int:
        """Image of a basis state given as an integer with bit i = wire i."""
        b_bit = (index >> self.n) & 1
        if self.kind == "parity":
            par = 0
            for i in range(self.n):
                par ^= (index >> i) & 1
            return index ^ (par << self.n)
        x_mask = (1 << self.n) - 1
        return index ^ (x_mask if b_bit else 0)


def apply_reference(op: ReferenceOp, s: PartialState) -> PartialState:
    """Apply the operator's basis permutation, extended linearly. The state
    must cover all n+1 wires of the op (it may cover more)."""
    missing = [w for w in op.wires if w not in s.wires]
    if missing:
        raise ValueError(f"state over {s.wires} does not cover op wires {missing}")
    index = np.arange(s.amps.size)
    positions = [s.position(w) for w in range(op.n)]
    b_pos = s.position(op.n)
    if op.kind == "parity":
        par = np.zeros(s.amps.size, dtype=np.int64)
        for p in positions:
            par ^= (index >> p) & 1
        new_index = index ^ (par << b_pos)
    else:
        b_bit = (index >> b_pos) & 1
        x_mask = 0
        for p in positions:
            x_mask |= 1 << p
        new_index = index ^ (b_bit * x_mask)
    out = np.empty_like(s.amps)
    out[new_index] = s.amps
    return PartialState(s.wires, out)


def reference_dense(op: ReferenceOp) -> np.ndarray:
    """Dense permutation matrix of the op on its own n+1 wires."""
    dim = 2 ** (op.n + 1)
    out = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        out[op.basis_map(j), j] = 1.0
    return out


# ---------------------------------------------------------------------------
# Log-depth parity construction
#
# The circuit computes the parity operator itself: the target picks up the
# XOR of all inputs and every input wire is returned to its original value.
# Restoring the inputs is what costs depth. A CNOT layer can feed the target
# from at most one wire, and a wire feeding the target at layer i can hold a
# subtree XOR of at most 2^(i-1) inputs (built in layers 1..i-1) that must be
# unwound again in layers i+1..d. The achievable leaf budget at depth d is
# therefore
#
#     capacity(d) = sum_{i=1..d} 2^min(i-1, d-i)
#
# and the builder emits the greedy schedule meeting it: per feed slot i, an
# XOR subtree over its own block of inputs, computed just in time, injected
# into the target at layer i, then unwound in mirror order.
# ---------------------------------------------------------------------------


def parity_capacity(depth: int) -> int:
    """Maximum number of inputs the pipelined-tree construction handles."""
    return sum(2 ** min(i - 1, depth - i) for i in range(1, depth + 1))


def parity_logdepth_depth(n: int) -> int:
    """Exact depth of build_parity_logdepth(n): min{d >= 1 : capacity(d) >= n}."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    d = 1
    while parity_capacity(d) < n:
        d += 1
    return d


def build_parity_logdepth(n: int) -> Circuit:
    """CNOT-only circuit on n+1 wires (inputs 0..n-1, target b = wire n) that
    computes the parity operator exactly, at the depth given by
    :func:`parity_logdepth_depth`. Works for every n >= 1, powers of two or not.
    """
    depth = parity_logdepth_depth(n)
    target = n
    layer_gates: list[list[Cnot]] = [[] for _ in range(depth)]

    # Greedy slot sizes: slot i (1-based layer) may carry 2^min(i-1, d-i) leaves.
    remaining = n
    next_wire = 0
    for slot in range(1, depth + 1):
        size = min(2 ** min(slot - 1, depth - slot), remaining)
        if size == 0:
            continue
        block = list(range(next_wire, next_wire + size))
        next_wire += size
        remaining -= size
        tree_depth = max(0, (size - 1).bit_length())  # ceil(log2(size)), 0 for size 1
        # Compute the block's XOR into block[0] during layers slot-tree_depth..slot-1.
        for level in range(1, tree_depth + 1):
            stride = 2 ** (level - 1)
            layer = slot - 1 - tree_depth + level
            for j in range(0, size, 2 * stride):
                if j + stride < size:
                    layer_gates[layer - 1].append(Cnot(block[j + stride], block[j]))
        layer_gates[slot - 1].append(Cnot(block[0], target))
        # Unwind in mirror order during layers slot+1..slot+tree_depth.
        for level in range(tree_depth, 0, -1):
            stride = 2 ** (level - 1)
            layer = slot + 1 + tree_depth - level
            for j in range(0, size, 2 * stride):
                if j + stride < size:
                    layer_gates[layer - 1].append(Cnot(block[j + stride], block[j]))
    assert remaining == 0, "slot capacities did not cover all inputs"
    return Circuit(
        n=n + 1,
        a=0,
        target=target,
        layers=tuple(Layer(gates) for gates in layer_gates),
    )


def conjugate_parity_to_fanout(c: Circuit) -> Circuit:
    """Sandwich the circuit between Hadamard layers on every non-ancilla wire
    (depth +2). A circuit computing parity cleanly then computes fanout
    cleanly, and vice versa."""
    h_layer = Layer(SingleQubit(w, HADAMARD) for w in range(c.n))
    return Circuit(
        n=c.n, a=c.a, target=c.target, layers=(h_layer,) + tuple(c.layers) + (h_layer,)
    )


@dataclass(frozen=True)
class TradeoffBound:
    """Minimum-depth formulas for computing an operator on n bits with a
    ancillae, as real numbers (callers take ceilings against integer depths).

    ``unbounded_gate_depth`` applies to circuits of single-qubit plus
    arbitrary-arity Toffoli/Z gates; ``bounded_gate_depth`` applies to
    circuits whose gate arity is bounded (any number of ancillae).
    """

    gate: OpKind
    n: int
    a: int
    unbounded_gate_depth: float
    bounded_gate_depth: float


def tradeoff_bound(n: int, a: int, gate: OpKind) -> TradeoffBound:
    """Depth lower bounds: parity needs depth >= 2*log2(n/(a+1)) against
    unbounded-arity Toffoli/Z circuits and >= log2(n) against bounded-arity
    circuits; fanout sheds 2 layers from each (its Hadamard conjugation)."""
    if n < 1 or a < 0:
        raise ValueError(f"need n >= 1, a >= 0, got n={n}, a={a}")
    unbounded = 2.0 * math.log2(n / (a + 1))
    bounded = math.log2(n)
    if gate == "fanout":
        unbounded = max(unbounded - 2.0, 0.0)
        bounded = bounded - 2.0
    elif gate != "parity":
        raise ValueError(f"unknown gate {gate!r}")
    return TradeoffBound(
        gate=gate, n=n, a=a, unbounded_gate_depth=unbounded, bounded_gate_depth=bounded
    )
