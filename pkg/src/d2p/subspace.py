"""Two-dimensional {|R>, |T>} model of Grover search.

Basis ordering is (|R>, |T>): index 0 is the equal superposition of unmarked
states, index 1 the equal superposition of marked states.  Operators are plain
``numpy`` arrays of shape ``(2, 2)``; every operator constructor broadcasts
over array-valued angles and then returns shape ``(..., 2, 2)``, which the
phase solver relies on for batched evaluation.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Threshold on sin(phi) below which the rotation axis is treated as undefined.
DEGENERATE_SIN = 1e-12

_PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


@dataclass(frozen=True)
class SubspaceState:
    a_R: complex
    a_T: complex

    @classmethod
    def from_array(cls, vec):
        return cls(complex(vec[0]), complex(vec[1]))

    def to_array(self):
        return np.array([self.a_R, self.a_T], dtype=complex)

    @property
    def norm(self):
        return float(np.hypot(abs(self.a_R), abs(self.a_T)))

    @property
    def success(self):
        """Probability of measuring a marked state."""
        return abs(self.a_T) ** 2


@dataclass(frozen=True)
class RotationDecomposition:
    """``M = cos(phi) I + i sin(phi) (n . sigma)`` with ``phi`` in [0, pi].

    When ``degenerate`` is set, ``sin(phi)`` is below ``DEGENERATE_SIN`` so M
    is +-I up to rounding and the axis carries no information.
    """

    phi: float
    n_x: float
    n_y: float
    n_z: float
    degenerate: bool = False

    @property
    def axis(self):
        return np.array([self.n_x, self.n_y, self.n_z])

    def matrix(self):
        return pair_power(self, 1)


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def to_array(self):
        return np.array([self.x, self.y, self.z])


def _check_lambda(lam):
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0, 1), got {lam!r}")


def _mat2(a, b, c, d):
    a, b, c, d = np.broadcast_arrays(a, b, c, d)
    out = np.empty(a.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = a
    out[..., 0, 1] = b
    out[..., 1, 0] = c
    out[..., 1, 1] = d
    return out


def initial_state(lam):
    """Equal superposition of all basis states, written in the (|R>, |T>) basis."""
    _check_lambda(lam)
    return SubspaceState(complex(np.sqrt(1.0 - lam)), complex(np.sqrt(lam)))


def oracle_matrix(alpha):
    """diag(1, e^{i alpha}): phase ``alpha`` on the marked component."""
    alpha = np.asarray(alpha, dtype=float)
    return _mat2(1.0, 0.0, 0.0, np.exp(1j * alpha))


def reflection_matrix(beta, lam):
    """Phase rotation by ``beta`` about the initial state.

    Equals ``e^{i beta} (I - (1 - e^{-i beta}) |psi0><psi0|)``, which leaves
    ``|psi0>`` fixed and multiplies its orthogonal complement by ``e^{i beta}``.
    """
    _check_lambda(lam)
    e = 1.0 - np.exp(1j * np.asarray(beta, dtype=float))
    s = np.sqrt(lam * (1.0 - lam))
    return _mat2(1.0 - e * lam, e * s, e * s, 1.0 - e * (1.0 - lam))


def grover_iterate(alpha, beta, lam):
    """``G(alpha, beta) = -S_r(beta) S_o(alpha)``, sign kept literally."""
    return -(reflection_matrix(beta, lam) @ oracle_matrix(alpha))


def apply(U, s):
    return SubspaceState.from_array(np.asarray(U) @ s.to_array())


def _pair_su2(theta1, theta2, lam, alpha=np.pi):
    """Components ``(c, v)`` of the unit-determinant pair operator.

    ``M = e^{-i(theta1+theta2)/2 - i(alpha-pi)} G(alpha, theta2) G(alpha, theta1)``
    written as ``c I + i v . sigma``.  For ``alpha == pi`` the closed forms are
    used directly; otherwise the components are read off the dense product.
    Broadcasts over ``theta1`` and ``theta2``.
    """
    t1 = np.asarray(theta1, dtype=float)
    t2 = np.asarray(theta2, dtype=float)
    if alpha == np.pi:
        s1, s2 = np.sin(t1 / 2), np.sin(t2 / 2)
        root = np.sqrt(lam * (1.0 - lam))
        c = np.cos((t1 + t2) / 2) + 8 * lam * (1 - lam) * s1 * s2
        v = np.stack(
            np.broadcast_arrays(
                2 * root * np.sin((t1 - t2) / 2),
                4 * (1 - 2 * lam) * root * s1 * s2,
                -(1 - 2 * lam) * np.sin((t1 + t2) / 2),
            ),
            axis=-1,
        )
        return np.broadcast_to(c, v.shape[:-1]), v
    # entries of G(alpha, t) = -S_r(t) S_o(alpha), written out to avoid
    # stacking (..., 2, 2) arrays in the solver's inner loop
    w = np.exp(1j * alpha)
    s = np.sqrt(lam * (1.0 - lam))
    e1, e2 = 1.0 - np.exp(1j * t1), 1.0 - np.exp(1j * t2)
    a1, b1, c1, d1 = e1 * lam - 1.0, -e1 * s * w, -e1 * s, (e1 * (1.0 - lam) - 1.0) * w
    a2, b2, c2, d2 = e2 * lam - 1.0, -e2 * s * w, -e2 * s, (e2 * (1.0 - lam) - 1.0) * w
    phase = np.exp(-1j * ((t1 + t2) / 2 + alpha - np.pi))
    p00 = (a2 * a1 + b2 * c1) * phase
    p01 = (a2 * b1 + b2 * d1) * phase
    p10 = (c2 * a1 + d2 * c1) * phase
    p11 = (c2 * b1 + d2 * d1) * phase
    c = 0.5 * (p00 + p11).real
    v = np.stack(
        [0.5 * (p01 + p10).imag, 0.5 * (p01 - p10).real, 0.5 * (p00 - p11).imag],
        axis=-1,
    )
    return c, v


def _power_coefficients(c, v, m):
    """``(cos(m phi), sin(m phi)/|v|)`` with the sin(phi) -> 0 limit handled."""
    vn = np.linalg.norm(v, axis=-1)
    phi = np.arctan2(vn, c)
    safe = vn > DEGENERATE_SIN
    ratio = np.where(
        safe,
        np.sin(m * phi) / np.where(safe, vn, 1.0),
        m * np.where(c < 0, -1.0, 1.0) ** (m - 1),
    )
    return np.cos(m * phi), ratio


def pair_iterate_decomposition(theta1, theta2, lam, alpha=np.pi):
    """Axis-angle form of two consecutive iterates with phases theta1, theta2."""
    _check_lambda(lam)
    c, v = _pair_su2(float(theta1), float(theta2), lam, alpha)
    vn = float(np.linalg.norm(v))
    phi = float(np.arctan2(vn, float(c)))
    if vn > 0.0:
        n = v / vn
    else:
        n = np.array([0.0, 0.0, 1.0])
    return RotationDecomposition(
        phi, float(n[0]), float(n[1]), float(n[2]), degenerate=np.sin(phi) < DEGENERATE_SIN
    )


def pair_power(d, m):
    """``cos(m phi) I + i sin(m phi) (n . sigma)``."""
    if m < 0:
        raise DomainError("power must be non-negative")
    n_sigma = np.tensordot(d.axis, _PAULI, axes=1)
    return np.cos(m * d.phi) * np.eye(2) + 1j * np.sin(m * d.phi) * n_sigma


def final_amplitudes(lam, alpha, theta1, theta2, k):
    """Batched ``(a_R, a_T)`` after ``k`` alternating iterates.

    The global phase differs from the literal iterate product; only the
    relative phase between the two amplitudes is meaningful.
    """
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    _check_lambda(lam)
    t1 = np.asarray(theta1, dtype=float)
    t2 = np.asarray(theta2, dtype=float)
    p0, p1 = np.sqrt(1.0 - lam), np.sqrt(lam)
    j = k // 2
    c, v = _pair_su2(t1, t2, lam, alpha)
    cj, q = _power_coefficients(c, v, j)
    vx, vy, vz = v[..., 0] * q, v[..., 1] * q, v[..., 2] * q
    a_R = cj * p0 + 1j * (vz * p0 + (vx - 1j * vy) * p1)
    a_T = cj * p1 + 1j * ((vx + 1j * vy) * p0 - vz * p1)
    if k % 2:
        G = grover_iterate(alpha, t1, lam)
        a_R, a_T = (
            G[..., 0, 0] * a_R + G[..., 0, 1] * a_T,
            G[..., 1, 0] * a_R + G[..., 1, 1] * a_T,
        )
    return a_R, a_T


def final_state(lam, alpha, theta1, theta2, k):
    a_R, a_T = final_amplitudes(lam, alpha, float(theta1), float(theta2), int(k))
    return SubspaceState(complex(a_R), complex(a_T))


def canonical_phase(a_R, a_T):
    """Unit factor that makes the larger amplitude real and non-negative.

    Ties go to ``a_R``.  Broadcasts over arrays.
    """
    a_R = np.asarray(a_R, dtype=complex)
    a_T = np.asarray(a_T, dtype=complex)
    ref = np.where(np.abs(a_R) >= np.abs(a_T), a_R, a_T)
    mag = np.abs(ref)
    return np.where(mag > 0, np.conj(ref) / np.where(mag > 0, mag, 1.0), 1.0)


def bloch_coords(s):
    u = canonical_phase(s.a_R, s.a_T)
    a_R, a_T = complex(s.a_R * u), complex(s.a_T * u)
    cross = np.conj(a_R) * a_T
    return BlochVector(
        float(2 * cross.real), float(2 * cross.imag), float(abs(a_R) ** 2 - abs(a_T) ** 2)
    )


def trajectory(lam, alpha, theta1, theta2, k):
    """Bloch points of the initial state and of the state after each iterate."""
    if k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    s = initial_state(lam)
    G1 = grover_iterate(alpha, theta1, lam)
    G2 = grover_iterate(alpha, theta2, lam)
    points = [bloch_coords(s)]
    for i in range(1, k + 1):
        s = apply(G1 if i % 2 else G2, s)
        points.append(bloch_coords(s))
    return points
