"""Exact statevector simulation on n qubits.

States are complex ``numpy`` vectors of length ``2**n``; qubit 0 is the least
significant bit of the index.  Gates act through index masks, so no dense
operators are formed.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import circuit as cq
from .errors import DomainError, OutOfSubspace
from .subspace import SubspaceState

MAX_QUBITS = 24
SUBSPACE_TOL = 1e-8


@dataclass(frozen=True)
class SearchSpec:
    n_qubits: int
    marked: Tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise DomainError(f"n_qubits must lie in [1, {MAX_QUBITS}], got {self.n_qubits}")
        marked = tuple(sorted(int(i) for i in self.marked))
        if len(set(marked)) != len(marked):
            raise DomainError("marked indices must be distinct")
        if not marked or len(marked) >= 2**self.n_qubits:
            raise DomainError("need 1 <= M < N marked states")
        if marked[0] < 0 or marked[-1] >= 2**self.n_qubits:
            raise DomainError(f"marked index out of range for {self.n_qubits} qubits")
        object.__setattr__(self, "marked", marked)

    @property
    def N(self):
        return 2**self.n_qubits

    @property
    def M(self):
        return len(self.marked)

    @property
    def lam(self):
        return self.M / self.N

    def marked_mask(self):
        mask = np.zeros(self.N, dtype=bool)
        mask[list(self.marked)] = True
        return mask


def _check_n(n):
    if not 1 <= n <= MAX_QUBITS:
        raise DomainError(f"n must lie in [1, {MAX_QUBITS}], got {n}")


def _n_of(state):
    n = int(state.size).bit_length() - 1
    if 2**n != state.size:
        raise DomainError("state length is not a power of two")
    return n


def uniform_superposition(n):
    _check_n(n)
    return np.full(2**n, 2.0 ** (-n / 2), dtype=complex)


def basis_state(n, index=0):
    _check_n(n)
    s = np.zeros(2**n, dtype=complex)
    s[index] = 1.0
    return s


def apply_gate(state, gate):
    """Return a new state with ``gate`` applied."""
    n = _n_of(state)
    cq.check_gate(gate, n)
    out = np.array(state, dtype=complex, copy=True)
    idx = np.arange(out.size)
    if isinstance(gate, cq.GlobalPhase):
        out *= np.exp(1j * gate.theta)
    elif isinstance(gate, (cq.Phase, cq.MCPhase)):
        qs = (gate.q,) if isinstance(gate, cq.Phase) else gate.qubits
        mask = sum(1 << q for q in qs)
        out[(idx & mask) == mask] *= np.exp(1j * gate.theta)
    elif isinstance(gate, (cq.H, cq.X)):
        bit = 1 << gate.q
        lo = idx[(idx & bit) == 0]
        a, b = out[lo], out[lo | bit]
        if isinstance(gate, cq.H):
            r = 1 / math.sqrt(2)
            out[lo], out[lo | bit] = r * (a + b), r * (a - b)
        else:
            out[lo], out[lo | bit] = b, a
    elif isinstance(gate, (cq.CNOT, cq.MCX)):
        controls = (gate.control,) if isinstance(gate, cq.CNOT) else gate.controls
        cmask = sum(1 << q for q in controls)
        bit = 1 << gate.target
        lo = idx[((idx & cmask) == cmask) & ((idx & bit) == 0)]
        a, b = out[lo], out[lo | bit]
        out[lo], out[lo | bit] = b, a
    else:
        raise TypeError(f"unknown gate {gate!r}")
    return out


def run(circuit, init=None):
    """Apply the gates in order; ``init`` defaults to |0...0>."""
    if init is None:
        init = basis_state(circuit.n_qubits)
    state = np.asarray(init, dtype=complex)
    if state.size != 2**circuit.n_qubits:
        raise DomainError("initial state does not match the circuit's qubit count")
    for g in circuit.gates:
        state = apply_gate(state, g)
    return state


def success_probability(state, marked):
    state = np.asarray(state)
    marked = list(marked)
    if marked and (min(marked) < 0 or max(marked) >= state.size):
        raise DomainError("marked index out of range")
    return float(np.sum(np.abs(state[marked]) ** 2))


def project_subspace(state, spec, tol=SUBSPACE_TOL):
    """Coordinates of ``state`` in the (|R>, |T>) basis plus the leftover norm.

    Raises :class:`OutOfSubspace` when the part of the state outside
    span{|R>, |T>} exceeds ``tol``.
    """
    state = np.asarray(state, dtype=complex)
    mask = spec.marked_mask()
    a_T = state[mask].sum() / math.sqrt(spec.M)
    a_R = state[~mask].sum() / math.sqrt(spec.N - spec.M)
    inside = np.where(mask, a_T / math.sqrt(spec.M), a_R / math.sqrt(spec.N - spec.M))
    residual = float(np.linalg.norm(state - inside))
    if residual > tol:
        raise OutOfSubspace(f"state leaves span{{|R>,|T>}} by {residual:.3e}", residual)
    return SubspaceState(complex(a_R), complex(a_T)), residual


def phase_oracle(state, marked, alpha):
    """Dense oracle: multiply the marked amplitudes by ``e^{i alpha}``."""
    out = np.array(state, dtype=complex, copy=True)
    out[list(marked)] *= np.exp(1j * alpha)
    return out


def reflect_about(state, axis_state, beta):
    """``e^{i beta}(I - (1 - e^{-i beta})|a><a|)`` applied to ``state``."""
    state = np.asarray(state, dtype=complex)
    axis_state = np.asarray(axis_state, dtype=complex)
    overlap = np.vdot(axis_state, state)
    return np.exp(1j * beta) * state - (np.exp(1j * beta) - 1.0) * overlap * axis_state


def amplify(init, marked, schedule):
    """Alternating oracle and ``-reflect_about(init)`` iterates from ``init``.

    The overlap ``sum_marked |init_i|^2`` must equal ``schedule.lam`` for the
    run to end on the marked subspace.
    """
    state = np.asarray(init, dtype=complex)
    for i in range(1, schedule.k + 1):
        theta = schedule.theta1 if i % 2 else schedule.theta2
        state = -reflect_about(phase_oracle(state, marked, schedule.alpha), init, theta)
    return state
