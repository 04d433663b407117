"""Gate-list circuits for the ancilla-free D2p search, their lowering and QASM export.

Qubit ``q`` is bit ``q`` of a basis-state index (qubit 0 is the least
significant bit).  ``Phase(q, theta)`` is ``diag(1, e^{i theta})`` and
``MCPhase(qubits, theta)`` multiplies the all-ones component of its qubits by
``e^{i theta}``.
"""

from dataclasses import dataclass, field
from typing import List, Tuple, Union

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class H:
    q: int

    @property
    def qubits(self):
        return (self.q,)


@dataclass(frozen=True)
class X:
    q: int

    @property
    def qubits(self):
        return (self.q,)


@dataclass(frozen=True)
class Phase:
    q: int
    theta: float

    @property
    def qubits(self):
        return (self.q,)


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    @property
    def qubits(self):
        return (self.control, self.target)


@dataclass(frozen=True)
class MCX:
    controls: Tuple[int, ...]
    target: int

    @property
    def qubits(self):
        return tuple(self.controls) + (self.target,)


@dataclass(frozen=True)
class MCPhase:
    qubits: Tuple[int, ...]
    theta: float


@dataclass(frozen=True)
class GlobalPhase:
    theta: float

    @property
    def qubits(self):
        return ()


GateOp = Union[H, X, Phase, CNOT, MCX, MCPhase, GlobalPhase]


def check_gate(gate, n_qubits):
    qs = gate.qubits
    if len(set(qs)) != len(qs):
        raise DomainError(f"repeated qubit in {gate!r}")
    for q in qs:
        if not 0 <= q < n_qubits:
            raise DomainError(f"qubit {q} out of range for {n_qubits} qubits in {gate!r}")
    if isinstance(gate, MCPhase) and not qs:
        raise DomainError("MCPhase needs at least one qubit")


@dataclass
class Circuit:
    n_qubits: int
    gates: List[GateOp] = field(default_factory=list)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise DomainError("a circuit needs at least one qubit")
        self.gates = list(self.gates)
        for g in self.gates:
            check_gate(g, self.n_qubits)

    def append(self, gate):
        check_gate(gate, self.n_qubits)
        self.gates.append(gate)

    def extend(self, gates):
        for g in gates:
            self.append(g)

    def __add__(self, other):
        if other.n_qubits != self.n_qubits:
            raise DomainError("qubit counts differ")
        return Circuit(self.n_qubits, self.gates + other.gates)

    def __len__(self):
        return len(self.gates)

    def count(self, kind):
        return sum(isinstance(g, kind) for g in self.gates)


def _bit_pattern_block(n, index, theta):
    flips = [X(q) for q in range(n) if not (index >> q) & 1]
    return flips + [MCPhase(tuple(range(n)), theta)] + flips


def build_oracle(spec, alpha=np.pi):
    """Phase ``e^{i alpha}`` on each marked basis state.

    One X-conjugated MCPhase block per marked index, in ascending order.
    """
    c = Circuit(spec.n_qubits)
    for idx in sorted(spec.marked):
        c.extend(_bit_pattern_block(spec.n_qubits, idx, alpha))
    return c


def build_reflection(n, theta):
    """Phase rotation by ``theta`` about the uniform superposition.

    The H-X-MCPhase-X-H sandwich multiplies |psi0> by the MCPhase angle, so
    the angle is negated to obtain ``S_r(theta)`` up to the global factor
    ``e^{-i theta}``.
    """
    if n < 1:
        raise DomainError("n must be positive")
    layer_h = [H(q) for q in range(n)]
    layer_x = [X(q) for q in range(n)]
    mid = [MCPhase(tuple(range(n)), -theta)]
    return Circuit(n, layer_h + layer_x + mid + layer_x + layer_h)


def build_iterate(spec, alpha, theta):
    """Oracle query followed by the reflection with phase ``theta``."""
    return build_oracle(spec, alpha) + build_reflection(spec.n_qubits, theta)


def build_d2p(spec, schedule):
    if abs(schedule.lam - spec.lam) > 1e-12:
        raise DomainError(
            f"schedule solved for lambda={schedule.lam!r}, search has lambda={spec.lam!r}"
        )
    n = spec.n_qubits
    c = Circuit(n, [H(q) for q in range(n)])
    first = build_iterate(spec, schedule.alpha, schedule.theta1)
    second = build_iterate(spec, schedule.alpha, schedule.theta2)
    for i in range(1, schedule.k + 1):
        c.extend((first if i % 2 else second).gates)
    return c


def lower_mcphase(gate, stop_at=1):
    """Peel one qubit off a multiply-controlled phase per recursion level.

    With ``t`` the last qubit and ``C`` the others::

        MCPhase(C+t, a) = MCPhase(C, a/2) . MCX(C->t) . Phase(t, -a/2) . MCX(C->t) . Phase(t, a/2)

    (rightmost acts first).  Recursion stops once the remaining MCPhase has
    ``stop_at`` qubits; the default lowers all the way to a single Phase.
    """
    qs = tuple(gate.qubits)
    n = max(qs) + 1
    if len(qs) <= stop_at:
        if len(qs) == 1:
            return Circuit(n, [Phase(qs[0], gate.theta)])
        return Circuit(n, [gate])
    controls, target = qs[:-1], qs[-1]
    half = gate.theta / 2
    gates = [
        Phase(target, half),
        MCX(controls, target),
        Phase(target, -half),
        MCX(controls, target),
    ]
    gates += lower_mcphase(MCPhase(controls, half), stop_at).gates
    return Circuit(n, gates)


def lower_cphase(gate):
    """Two-qubit controlled phase as two CNOTs and three single-qubit phases.

    The phase gates are ``diag(1, e^{i a})`` rather than symmetric Z
    rotations, so the product is exact and no global-phase correction is
    emitted.
    """
    if len(gate.qubits) != 2:
        raise DomainError("lower_cphase needs a two-qubit MCPhase")
    c, t = gate.qubits
    half = gate.theta / 2
    return Circuit(
        max(c, t) + 1,
        [Phase(t, half), CNOT(c, t), Phase(t, -half), CNOT(c, t), Phase(c, half)],
    )


def lower_all(circuit):
    """Replace every MCPhase by MCX, CNOT and single-qubit phase gates."""
    out = Circuit(circuit.n_qubits)
    for g in circuit.gates:
        if not isinstance(g, MCPhase):
            out.append(g)
            continue
        for h in lower_mcphase(g, stop_at=2).gates:
            if isinstance(h, MCPhase):
                out.extend(lower_cphase(h).gates)
            else:
                out.append(h)
    return out


_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)


def _embed_single(m, q, n):
    # kron order puts qubit n-1 first so that qubit 0 is the least significant bit
    ops = [m if k == q else np.eye(2) for k in reversed(range(n))]
    out = np.array([[1.0 + 0j]])
    for op in ops:
        out = np.kron(out, op)
    return out


def gate_matrix(gate, n):
    """Dense ``2^n x 2^n`` matrix of one gate."""
    dim = 2**n
    if isinstance(gate, H):
        return _embed_single(_H, gate.q, n)
    if isinstance(gate, X):
        return _embed_single(_X, gate.q, n)
    if isinstance(gate, Phase):
        return _embed_single(np.diag([1, np.exp(1j * gate.theta)]), gate.q, n)
    if isinstance(gate, GlobalPhase):
        return np.exp(1j * gate.theta) * np.eye(dim)
    idx = np.arange(dim)
    if isinstance(gate, MCPhase):
        mask = sum(1 << q for q in gate.qubits)
        return np.diag(np.where((idx & mask) == mask, np.exp(1j * gate.theta), 1.0))
    if isinstance(gate, (CNOT, MCX)):
        controls = (gate.control,) if isinstance(gate, CNOT) else gate.controls
        mask = sum(1 << q for q in controls)
        image = np.where((idx & mask) == mask, idx ^ (1 << gate.target), idx)
        P = np.zeros((dim, dim), dtype=complex)
        P[image, idx] = 1.0
        return P
    raise TypeError(f"unknown gate {gate!r}")


def circuit_unitary(circuit):
    n = circuit.n_qubits
    if n > 10:
        raise DomainError("dense unitaries are limited to 10 qubits")
    U = np.eye(2**n, dtype=complex)
    for g in circuit.gates:
        U = gate_matrix(g, n) @ U
    return U


def _angle(x):
    return f"{float(x):.17g}"


def _qasm_line(g):
    if isinstance(g, H):
        return f"h q[{g.q}];"
    if isinstance(g, X):
        return f"x q[{g.q}];"
    if isinstance(g, Phase):
        return f"p({_angle(g.theta)}) q[{g.q}];"
    if isinstance(g, CNOT):
        return f"cx q[{g.control}], q[{g.target}];"
    if isinstance(g, GlobalPhase):
        return f"gphase({_angle(g.theta)});"
    if isinstance(g, MCX):
        args = ", ".join(f"q[{q}]" for q in g.qubits)
        return f"ctrl({len(g.controls)}) @ x {args};"
    if isinstance(g, MCPhase):
        args = ", ".join(f"q[{q}]" for q in g.qubits)
        if len(g.qubits) == 1:
            return f"p({_angle(g.theta)}) {args};"
        return f"ctrl({len(g.qubits) - 1}) @ p({_angle(g.theta)}) {args};"
    raise TypeError(f"unknown gate {g!r}")


def to_qasm(circuit):
    """OpenQASM 3.0 text; identical circuits give identical strings."""
    lines = [
        "OPENQASM 3.0;",
        'include "stdgates.inc";',
        "// qubit q[0] is the least significant bit of the basis-state index",
        f"qubit[{circuit.n_qubits}] q;",
    ]
    lines += [_qasm_line(g) for g in circuit.gates]
    return "\n".join(lines) + "\n"
