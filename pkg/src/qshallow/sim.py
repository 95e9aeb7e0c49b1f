"""Exact state-vector simulation over arbitrary wire subsets.

A :class:`PartialState` holds amplitudes for an explicit subset of a circuit's
wires, so sub-circuits can be simulated on exactly the wires they touch.

Amplitude indexing convention: the wire set is kept sorted ascending and bit
``p`` of the amplitude index (value ``2**p``) carries the p-th smallest wire.
So for wires (2, 5, 9), index 0b011 is the basis state with wires 2 and 5 set
to 1 and wire 9 set to 0.

Gates are refused when they touch wires outside the state, with one audited
exception: a Z-gate may have wires outside the state if at least one of those
wires is declared fixed to |0> by the caller, in which case the gate acts as
the identity (its all-ones sign condition can never fire).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .circuits import Circuit, Cnot, Gate, Layer, MeasurementSpec, SingleQubit, Toffoli, ZGate

NORM_TOL = 1e-10
EXACT_ZERO_P1 = 1e-9


class CoverageError(ValueError):
    """A gate touches wires that the state does not cover."""


@dataclass(frozen=True)
class PartialState:
    """Unit-norm complex amplitudes over an explicit, sorted set of wires."""

    wires: tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self) -> None:
        wires = tuple(self.wires)
        if len(set(wires)) != len(wires):
            raise ValueError(f"duplicate wires in state: {wires}")
        if any(wires[i] >= wires[i + 1] for i in range(len(wires) - 1)):
            raise ValueError(f"state wires must be sorted ascending: {wires}")
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (2 ** len(wires),):
            raise ValueError(
                f"amplitude vector has length {amps.shape}, expected {2 ** len(wires)}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} is not 1 within {NORM_TOL}")
        object.__setattr__(self, "wires", wires)
        object.__setattr__(self, "amps", amps)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(wires: Iterable[int]) -> "PartialState":
        wires = tuple(sorted(wires))
        amps = np.zeros(2 ** len(wires), dtype=complex)
        amps[0] = 1.0
        return PartialState(wires, amps)

    @staticmethod
    def basis(wires: Iterable[int], bits: dict[int, int]) -> "PartialState":
        """Basis state with the given wire -> bit assignment (missing wires are 0)."""
        wires = tuple(sorted(wires))
        index = 0
        for p, w in enumerate(wires):
            if bits.get(w, 0):
                index |= 1 << p
        amps = np.zeros(2 ** len(wires), dtype=complex)
        amps[index] = 1.0
        return PartialState(wires, amps)

    @staticmethod
    def random(wires: Iterable[int], rng: np.random.Generator) -> "PartialState":
        """Haar-ish random unit vector (normalized complex Gaussian)."""
        wires = tuple(sorted(wires))
        raw = rng.standard_normal(2 ** len(wires)) + 1j * rng.standard_normal(
            2 ** len(wires)
        )
        return PartialState(wires, raw / np.linalg.norm(raw))

    # -- structure ----------------------------------------------------------

    def position(self, wire: int) -> int:
        """Bit position of a wire in the amplitude index."""
        try:
            return self.wires.index(wire)
        except ValueError:
            raise CoverageError(f"wire {wire} not covered by state over {self.wires}")

    def tensor(self, other: "PartialState") -> "PartialState":
        """Tensor product with a state over disjoint wires."""
        overlap = set(self.wires) & set(other.wires)
        if overlap:
            raise ValueError(f"tensor factors share wires {sorted(overlap)}")
        merged = tuple(sorted(self.wires + other.wires))
        index = np.arange(2 ** len(merged))
        own = np.zeros_like(index)
        theirs = np.zeros_like(index)
        for p, w in enumerate(merged):
            bit = (index >> p) & 1
            if w in self.wires:
                own |= bit << self.wires.index(w)
            else:
                theirs |= bit << other.wires.index(w)
        return PartialState(merged, self.amps[own] * other.amps[theirs])

    def extend_zeros(self, new_wires: Iterable[int]) -> "PartialState":
        """Grow the state by tensoring |0> on each new wire."""
        new_wires = tuple(sorted(set(new_wires) - set(self.wires)))
        if not new_wires:
            return self
        return self.tensor(PartialState.zero(new_wires))

    def restricted_probability(self, wire: int, value: int) -> float:
        """Total probability mass with the given wire equal to value."""
        p = self.position(wire)
        bit = (np.arange(self.amps.size) >> p) & 1
        mask = bit == value
        return float(np.sum(np.abs(self.amps[mask]) ** 2))


@dataclass(frozen=True)
class TargetReading:
    """Probability of measuring |1> on the target wire."""

    p1: float
    exact_zero: bool

    def __post_init__(self) -> None:
        if not -1e-12 <= self.p1 <= 1.0 + 1e-12:
            raise ValueError(f"probability {self.p1} outside [0, 1]")


def adjoint_gate(g: Gate) -> Gate:
    """Per-gate adjoint; Z/Toffoli/Cnot are involutions."""
    if isinstance(g, SingleQubit):
        return SingleQubit(g.wire, g.u.conj().T)
    return g


def apply_gate(
    g: Gate, s: PartialState, fixed_zero: frozenset[int] = frozenset()
) -> PartialState:
    """Apply one gate. ``fixed_zero`` lists wires outside the state that the
    caller promises are |0>; a Z-gate with such a wire acts as the identity."""
    if isinstance(g, ZGate):
        outside = [w for w in g.wires if w not in s.wires]
        if outside:
            if any(w in fixed_zero for w in outside):
                return s
            raise CoverageError(
                f"z-gate wires {outside} outside state over {s.wires} and not fixed to 0"
            )
        index = np.arange(s.amps.size)
        ones = np.ones(s.amps.size, dtype=bool)
        for w in g.wires:
            ones &= ((index >> s.position(w)) & 1) == 1
        amps = s.amps.copy()
        amps[ones] = -amps[ones]
        return PartialState(s.wires, amps)

    if isinstance(g, SingleQubit):
        p = s.position(g.wire)
        m = len(s.wires)
        # index = high * 2**(p+1) + bit * 2**p + low
        tensor = s.amps.reshape(2 ** (m - 1 - p), 2, 2 ** p)
        out = np.einsum("ab,hbl->hal", g.u, tensor)
        return PartialState(s.wires, np.ascontiguousarray(out).reshape(-1))

    if isinstance(g, (Toffoli, Cnot)):
        if isinstance(g, Cnot):
            controls, target = (g.control,), g.target
        else:
            controls, target = g.controls, g.target
        pt = s.position(target)
        index = np.arange(s.amps.size)
        active = np.ones(s.amps.size, dtype=bool)
        for w in controls:
            active &= ((index >> s.position(w)) & 1) == 1
        lower = active & (((index >> pt) & 1) == 0)
        src = index[lower]
        dst = src + (1 << pt)
        amps = s.amps.copy()
        amps[src], amps[dst] = s.amps[dst], s.amps[src]
        return PartialState(s.wires, amps)

    raise TypeError(f"unknown gate type {type(g).__name__}")


def apply_layer(
    layer: Layer, s: PartialState, fixed_zero: frozenset[int] = frozenset()
) -> PartialState:
    """Apply every gate of a layer (order irrelevant: disjoint supports)."""
    for g in layer.gates:
        s = apply_gate(g, s, fixed_zero)
    return s


def run(
    c: Circuit,
    state: PartialState,
    from_layer: int = 0,
    to_layer: int | None = None,
    adjoint: bool = False,
    fixed_zero: frozenset[int] = frozenset(),
) -> PartialState:
    """Apply ``layers[from_layer ..= to_layer]`` in application order, or the
    adjoint of that slice (reversed order, per-gate adjoints) when ``adjoint``.

    ``to_layer`` is inclusive and defaults to the last layer; a slice with
    ``to_layer < from_layer`` is empty and returns the input unchanged.
    """
    if to_layer is None:
        to_layer = c.depth() - 1
    indices = range(from_layer, to_layer + 1)
    if adjoint:
        for i in reversed(indices):
            for g in c.layers[i].gates:
                state = apply_gate(adjoint_gate(g), state, fixed_zero)
    else:
        for i in indices:
            state = apply_layer(c.layers[i], state, fixed_zero)
    return state


def read_target(s: PartialState, m: MeasurementSpec) -> TargetReading:
    """Probability mass on target = 1; flags p1 <= 1e-9 as exactly zero."""
    p1 = s.restricted_probability(m.wire, 1)
    return TargetReading(p1=p1, exact_zero=p1 <= EXACT_ZERO_P1)


def full_input_state(c: Circuit, input_bits: dict[int, int]) -> PartialState:
    """Basis state over all wires of the circuit; unlisted wires (including
    all ancillae) start as |0>."""
    return PartialState.basis(range(c.wires), input_bits)


def dense_operator(c: Circuit, max_wires: int = 12) -> np.ndarray:
    """Full 2^w x 2^w matrix of the circuit (column j = circuit applied to
    basis state j). Guarded to small circuits."""
    w = c.wires
    if w > max_wires:
        raise ValueError(f"dense_operator limited to {max_wires} wires, circuit has {w}")
    dim = 2 ** w
    out = np.empty((dim, dim), dtype=complex)
    wires = tuple(range(w))
    for j in range(dim):
        amps = np.zeros(dim, dtype=complex)
        amps[j] = 1.0
        out[:, j] = run(c, PartialState(wires, amps)).amps
    return out


def states_allclose(s1: PartialState, s2: PartialState, tol: float = 1e-10) -> bool:
    """Amplitude-wise comparison over the same wire set (no phase freedom)."""
    if s1.wires != s2.wires:
        return False
    return bool(np.abs(s1.amps - s2.amps).max() <= tol)
