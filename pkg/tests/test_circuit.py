import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from d2p import circuit as cq
from d2p import solver
from d2p import statevector as sv
from d2p import subspace as ss
from d2p.errors import DomainError

DATA = Path(__file__).parent / "data"

HADAMARD = np.array([[1, 1], [1, -1]]) / math.sqrt(2)


def equal_up_to_phase(A, B, tol):
    idx = np.unravel_index(np.argmax(np.abs(B)), B.shape)
    ph = A[idx] / B[idx]
    return abs(abs(ph) - 1) < tol and np.max(np.abs(A - ph * B)) < tol


def subspace_block(U, spec):
    # 2x2 action of U on span{|R>, |T>}
    mask = spec.marked_mask()
    R = np.where(mask, 0, 1 / math.sqrt(spec.N - spec.M)).astype(complex)
    T = np.where(mask, 1 / math.sqrt(spec.M), 0).astype(complex)
    basis = np.stack([R, T], axis=1)
    return basis.conj().T @ U @ basis


def quarter_schedule():
    return solver.PhaseSchedule(0.25, math.pi, 1, math.pi, math.pi, 0.0)


# ---- circuits ---------------------------------------------------------------


def test_circuit_rejects_out_of_range_gate():
    with pytest.raises(DomainError):
        cq.Circuit(2, [cq.H(2)])
    c = cq.Circuit(2)
    with pytest.raises(DomainError):
        c.append(cq.MCPhase((0, 0), 1.0))
    with pytest.raises(DomainError):
        cq.Circuit(0)


def test_circuit_concatenation():
    a = cq.Circuit(2, [cq.H(0)])
    b = cq.Circuit(2, [cq.X(1)])
    assert (a + b).gates == [cq.H(0), cq.X(1)]
    with pytest.raises(DomainError):
        a + cq.Circuit(3)


# ---- oracle -----------------------------------------------------------------


def test_oracle_all_ones():
    c = cq.build_oracle(sv.SearchSpec(2, (3,)))
    assert c.gates == [cq.MCPhase((0, 1), math.pi)]
    np.testing.assert_allclose(cq.circuit_unitary(c), np.diag([1, 1, 1, -1]), atol=1e-15)


def test_oracle_all_zeros():
    c = cq.build_oracle(sv.SearchSpec(2, (0,)))
    assert c.gates == [cq.X(0), cq.X(1), cq.MCPhase((0, 1), math.pi), cq.X(0), cq.X(1)]
    np.testing.assert_allclose(cq.circuit_unitary(c), np.diag([-1, 1, 1, 1]), atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_oracle_is_marked_phase_diagonal(data):
    n = data.draw(st.integers(1, 5))
    marked = data.draw(st.lists(st.integers(0, 2**n - 1), min_size=1, max_size=max(1, 2**n - 1), unique=True))
    alpha = data.draw(st.floats(-math.pi, math.pi))
    U = cq.circuit_unitary(cq.build_oracle(sv.SearchSpec(n, marked), alpha))
    expect = np.ones(2**n, dtype=complex)
    expect[marked] = np.exp(1j * alpha)
    assert np.max(np.abs(U - np.diag(np.diag(U)))) < 1e-14
    np.testing.assert_allclose(np.diag(U), expect, atol=1e-14)


def test_oracle_two_marked_three_qubits():
    alpha = 0.9
    U = cq.circuit_unitary(cq.build_oracle(sv.SearchSpec(3, (5, 2)), alpha))
    expect = np.ones(8, dtype=complex)
    expect[[2, 5]] = np.exp(1j * alpha)
    np.testing.assert_allclose(U, np.diag(expect), atol=1e-14)


# ---- reflection -------------------------------------------------------------


def test_reflection_single_qubit_pi():
    # reflection about |+>: 2|+><+| - I up to global phase
    plus = np.array([1, 1]) / math.sqrt(2)
    target = 2 * np.outer(plus, plus) - np.eye(2)
    assert equal_up_to_phase(cq.circuit_unitary(cq.build_reflection(1, math.pi)), target, 1e-12)


def test_reflection_zero_is_identity():
    assert equal_up_to_phase(cq.circuit_unitary(cq.build_reflection(3, 0.0)), np.eye(8), 1e-12)


@pytest.mark.parametrize("theta", [math.pi, 1.1, -2.3])
def test_reflection_dense_form(theta):
    n = 2
    u = np.full(2**n, 2 ** (-n / 2))
    dense = np.exp(1j * theta) * (np.eye(2**n) - (1 - np.exp(-1j * theta)) * np.outer(u, u))
    assert equal_up_to_phase(cq.circuit_unitary(cq.build_reflection(n, theta)), dense, 1e-12)


def test_oracle_plus_reflection_is_standard_iterate():
    spec = sv.SearchSpec(3, (6,))
    U = cq.circuit_unitary(cq.build_iterate(spec, math.pi, math.pi))
    block = subspace_block(U, spec)
    assert equal_up_to_phase(block, ss.grover_iterate(math.pi, math.pi, 1 / 8), 1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi))
def test_iterate_block_matches_model(alpha, theta):
    spec = sv.SearchSpec(3, (1, 4))
    U = cq.circuit_unitary(cq.build_iterate(spec, alpha, theta))
    assert equal_up_to_phase(subspace_block(U, spec), ss.grover_iterate(alpha, theta, spec.lam), 1e-12)


# ---- full D2p circuit -------------------------------------------------------


def test_d2p_quarter():
    spec = sv.SearchSpec(2, (3,))
    out = sv.run(cq.build_d2p(spec, quarter_schedule()))
    assert abs(abs(out[3]) - 1) < 1e-12


def test_d2p_sixteenth_marked_seven():
    spec = sv.SearchSpec(4, (7,))
    out = sv.run(cq.build_d2p(spec, solver.solve(spec.lam, 3)))
    assert sv.success_probability(out, spec.marked) >= 1 - 1e-8


def test_d2p_two_marked_equal_split():
    spec = sv.SearchSpec(4, (1, 2))
    sched = solver.solve(spec.lam, 2)
    out = sv.run(cq.build_d2p(spec, sched))
    assert sv.success_probability(out, spec.marked) >= 1 - 1e-8
    assert abs(abs(out[1]) ** 2 - 0.5) < 1e-9
    assert abs(abs(out[2]) ** 2 - 0.5) < 1e-9


def test_d2p_iterate_order():
    spec = sv.SearchSpec(3, (5,))
    sched = solver.PhaseSchedule(spec.lam, math.pi, 3, 0.3, -0.7, 0.0)
    c = cq.build_d2p(spec, sched)
    angles = [g.theta for g in c.gates if isinstance(g, cq.MCPhase) and g.theta != math.pi]
    assert angles == [-0.3, 0.7, -0.3]


def test_d2p_lambda_mismatch():
    with pytest.raises(DomainError):
        cq.build_d2p(sv.SearchSpec(4, (1,)), quarter_schedule())


# ---- lowering ---------------------------------------------------------------


def test_lower_base_case():
    assert cq.lower_mcphase(cq.MCPhase((2,), 0.4)).gates == [cq.Phase(2, 0.4)]


def test_lower_three_qubits_quarter_turn():
    low = cq.lower_mcphase(cq.MCPhase((0, 1, 2), math.pi / 2))
    expect = np.ones(8, dtype=complex)
    expect[7] = 1j
    np.testing.assert_allclose(cq.circuit_unitary(low), np.diag(expect), atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_lower_mcphase_exact_with_gate_counts(data):
    m = data.draw(st.integers(1, 6))
    qubits = tuple(data.draw(st.permutations(range(6)))[:m])
    theta = data.draw(st.floats(-math.pi, math.pi))
    gate = cq.MCPhase(qubits, theta)
    low = cq.lower_mcphase(gate)
    full = cq.Circuit(6, low.gates)
    np.testing.assert_allclose(
        cq.circuit_unitary(full), cq.circuit_unitary(cq.Circuit(6, [gate])), atol=1e-10
    )
    assert low.count(cq.MCX) == 2 * (m - 1)
    assert low.count(cq.Phase) == 2 * (m - 1) + 1
    assert max(max(g.qubits) for g in low.gates) <= max(qubits)


@settings(max_examples=40, deadline=None)
@given(st.floats(-math.pi, math.pi))
def test_lower_two_qubit_stages_agree(theta):
    gate = cq.MCPhase((0, 1), theta)
    a = cq.circuit_unitary(cq.lower_mcphase(gate))
    b = cq.circuit_unitary(cq.lower_cphase(gate))
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_lower_cphase_shape_and_cz():
    low = cq.lower_cphase(cq.MCPhase((0, 1), math.pi))
    assert low.count(cq.CNOT) == 2 and low.count(cq.Phase) == 3
    np.testing.assert_allclose(cq.circuit_unitary(low), np.diag([1, 1, 1, -1]), atol=1e-12)
    zero = cq.lower_cphase(cq.MCPhase((1, 0), 0.0))
    assert equal_up_to_phase(cq.circuit_unitary(zero), np.eye(4), 1e-12)
    with pytest.raises(DomainError):
        cq.lower_cphase(cq.MCPhase((0, 1, 2), 1.0))


@settings(max_examples=60, deadline=None)
@given(st.floats(-math.pi, math.pi))
def test_lower_cphase_dense(theta):
    low = cq.lower_cphase(cq.MCPhase((0, 1), theta))
    np.testing.assert_allclose(cq.circuit_unitary(low), np.diag([1, 1, 1, np.exp(1j * theta)]), atol=1e-12)


def test_lower_all_single_gate():
    c = cq.Circuit(4, [cq.MCPhase((0, 1, 2, 3), 0.77)])
    low = cq.lower_all(c)
    assert low.count(cq.MCPhase) == 0
    assert {type(g) for g in low.gates} <= {cq.H, cq.X, cq.Phase, cq.CNOT, cq.MCX, cq.GlobalPhase}
    np.testing.assert_allclose(cq.circuit_unitary(low), cq.circuit_unitary(c), atol=1e-10)


def test_lower_all_idempotent():
    spec = sv.SearchSpec(3, (2, 5))
    low = cq.lower_all(cq.build_d2p(spec, solver.solve(spec.lam)))
    assert cq.lower_all(low).gates == low.gates


@pytest.mark.parametrize("n, marked", [(4, (7,)), (5, (1, 20)), (6, (0, 9, 33))])
def test_lower_all_end_to_end(n, marked):
    spec = sv.SearchSpec(n, marked)
    c = cq.build_d2p(spec, solver.solve(spec.lam))
    low = cq.lower_all(c)
    assert low.n_qubits == n
    np.testing.assert_allclose(cq.circuit_unitary(low), cq.circuit_unitary(c), atol=1e-10)
    p0 = sv.success_probability(sv.run(c), marked)
    p1 = sv.success_probability(sv.run(low), marked)
    assert abs(p0 - p1) < 1e-9 and p1 >= 1 - 1e-8


# ---- dense unitaries ----------------------------------------------------------


def test_circuit_unitary_examples():
    np.testing.assert_allclose(cq.circuit_unitary(cq.Circuit(1, [cq.H(0)])), HADAMARD, atol=1e-15)
    np.testing.assert_allclose(cq.circuit_unitary(cq.Circuit(1, [cq.X(0), cq.X(0)])), np.eye(2))
    with pytest.raises(DomainError):
        cq.circuit_unitary(cq.Circuit(11))


def test_circuit_unitary_qubit_order():
    # X on qubit 0 maps index 0 to index 1
    U = cq.circuit_unitary(cq.Circuit(3, [cq.X(0)]))
    assert U[1, 0] == 1
    U = cq.circuit_unitary(cq.Circuit(3, [cq.X(2)]))
    assert U[4, 0] == 1


# ---- QASM ---------------------------------------------------------------------


def test_qasm_hadamard():
    text = cq.to_qasm(cq.Circuit(1, [cq.H(0)]))
    assert text.startswith("OPENQASM 3.0;\n")
    assert "h q[0];" in text.splitlines()
    assert "least significant bit" in text


def test_qasm_golden():
    spec = sv.SearchSpec(2, (3,))
    text = cq.to_qasm(cq.build_d2p(spec, quarter_schedule()))
    assert text == (DATA / "d2p_n2_marked3_k1.qasm").read_text(encoding="utf-8")


def test_qasm_deterministic():
    spec = sv.SearchSpec(4, (3, 10))
    c = cq.lower_all(cq.build_d2p(spec, solver.solve(spec.lam)))
    assert cq.to_qasm(c).encode() == cq.to_qasm(c).encode()


def test_qasm_gate_forms():
    c = cq.Circuit(
        3,
        [
            cq.MCPhase((0, 1, 2), 0.5),
            cq.MCX((0, 1), 2),
            cq.CNOT(0, 2),
            cq.Phase(1, -0.25),
            cq.GlobalPhase(0.125),
        ],
    )
    lines = cq.to_qasm(c).splitlines()[-5:]
    assert lines == [
        "ctrl(2) @ p(0.5) q[0], q[1], q[2];",
        "ctrl(2) @ x q[0], q[1], q[2];",
        "cx q[0], q[2];",
        "p(-0.25) q[1];",
        "gphase(0.125);",
    ]


def test_qasm_angles_round_trip():
    theta = 2.195057699090115
    line = cq.to_qasm(cq.Circuit(1, [cq.Phase(0, theta)])).splitlines()[-1]
    assert float(line[2:line.index(")")]) == theta
