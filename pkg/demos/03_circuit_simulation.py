"""Build the ancilla-free circuit, lower it, simulate it, and write QASM."""

from d2p import circuit as cq
from d2p import solver
from d2p import statevector as sv

spec = sv.SearchSpec(n_qubits=5, marked=(6, 19))
sched = solver.solve(spec.lam)
print(f"N={spec.N} M={spec.M} lambda={spec.lam} k={sched.k}")

c = cq.build_d2p(spec, sched)
low = cq.lower_all(c)
print(f"gates: {len(c)} before lowering, {len(low)} after "
      f"({low.count(cq.MCX)} MCX, {low.count(cq.CNOT)} CNOT, {low.count(cq.Phase)} phase)")

for name, circ in (("unlowered", c), ("lowered", low)):
    state = sv.run(circ)
    probs = {i: round(float(abs(state[i]) ** 2), 12) for i in spec.marked}
    print(f"{name:>9}: success {sv.success_probability(state, spec.marked):.15f}  {probs}")

# The marked amplitudes come out equal, so the final state is |T> itself.
print(sv.project_subspace(sv.run(c), spec)[0])

print(cq.to_qasm(cq.build_d2p(sv.SearchSpec(2, (3,)), solver.solve(0.25))))
