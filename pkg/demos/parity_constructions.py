# Build log-depth parity circuits out of Cnot gates, check them the hard way,
# and turn them into fanout circuits by Hadamard conjugation.

from qshallow import (
    ReferenceOp,
    build_parity_logdepth,
    conjugate_parity_to_fanout,
    parity_capacity,
    parity_logdepth_depth,
    serialize_circuit,
    verify_clean,
)

# The construction feeds the target wire from one subtree per layer, computing
# each subtree's XOR just in time and unwinding it afterwards so every input
# wire ends where it started. The reachable input count per depth:
print("depth d :", list(range(1, 10)))
print("capacity:", [parity_capacity(d) for d in range(1, 10)])
print()

print(" n   depth   clean?  max deviation")
for n in [1, 2, 3, 4, 6, 8, 12, 16]:
    c = build_parity_logdepth(n)
    result = verify_clean(c, ReferenceOp("parity", n))
    print(
        f"{n:2d}   {c.depth():3d}     {str(result.ok).lower():5s}   "
        f"{result.max_deviation:.1e}   (checked {result.checked} basis inputs)"
    )
print()

# The n = 4 circuit, layer by layer. Wire 4 is the target; note how the pair
# (1, 2) is combined, fed in, and uncombined while other feeds happen.
c4 = build_parity_logdepth(4)
for i, layer in enumerate(c4.layers):
    ops = ", ".join(f"cnot({g.control}->{g.target})" for g in layer.gates)
    print(f"layer {i}: {ops}")
print()

# Sandwiching between Hadamard layers swaps the roles of parity and fanout.
f4 = conjugate_parity_to_fanout(c4)
result = verify_clean(f4, ReferenceOp("fanout", 4))
print(f"conjugated circuit depth {f4.depth()} computes fanout cleanly: {result.ok}")
print()

print("circuit document for n = 2:")
print(serialize_circuit(build_parity_logdepth(2)))
