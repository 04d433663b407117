"""Query counts and two-phase schedules for deterministic search.

The solver drives ``<R|psi_f> = 0`` to zero with a damped Newton iteration on
the exact 2x2 model.  The closed-form phase conditions for even and odd query
counts are exposed separately and used only as cross-checks.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import subspace
from .errors import DomainError, NoConvergence, PoleError

STOP_TOL = 1e-12
ACCEPT_TOL = 1e-10
MAX_NEWTON_STEPS = 100
FD_STEP = 1e-7
MULTISTART_GRID = 16
EXCLUSION_GRID = 32
EXCLUSION_DEPTH = 14
EXCLUSION_MAX_CELLS = 400_000

# Relative slack when a query-count expression lands on an integer boundary.
_SNAP = 1e-12

LARGE_LAMBDA_MESSAGE = (
    "no deterministic two-phase schedule exists for lambda > 1/4; for "
    "1/4 < lambda < 1/2 run a single standard Grover iteration (success is "
    "already high) or fall back to classical search"
)


@dataclass(frozen=True)
class PhaseSchedule:
    lam: float
    alpha: float
    k: int
    theta1: float
    theta2: float
    residual_norm: float

    def final_state(self):
        return subspace.final_state(self.lam, self.alpha, self.theta1, self.theta2, self.k)

    @property
    def success(self):
        return self.final_state().success

    def as_dict(self):
        return {
            "lambda": self.lam,
            "alpha": self.alpha,
            "k": self.k,
            "theta1": self.theta1,
            "theta2": self.theta2,
            "residual_norm": self.residual_norm,
        }


@dataclass(frozen=True)
class QueryPlan:
    k_opt: int
    k_prime_opt: int
    theta: float
    theta0: Optional[float]


def _polar_angle(lam):
    return 2.0 * math.asin(math.sqrt(lam))


def _steps_expression(lam):
    # pi / (4 asin sqrt(lam)) - 1/2, i.e. the fractional number of standard iterates
    return math.pi / (4.0 * math.asin(math.sqrt(lam))) - 0.5


def _snap(x):
    r = round(x)
    return float(r) if abs(x - r) <= _SNAP * max(1.0, abs(x)) else x


def k_opt(lam):
    """Smallest query count admitting a deterministic two-phase schedule."""
    if not 0.0 < lam <= 0.25:
        raise DomainError(f"k_opt needs 0 < lambda <= 1/4, got {lam!r}")
    return max(1, math.ceil(_snap(_steps_expression(lam))))


def k_prime_opt(lam):
    """Optimal iteration count of standard Grover search (round half up)."""
    if not 0.0 < lam < 0.5:
        raise DomainError(f"k_prime_opt needs 0 < lambda < 1/2, got {lam!r}")
    x = _steps_expression(lam)
    # snap the half-integer ties before rounding up
    return max(1, math.floor(_snap(x + 0.5)))


def theta0(lam, k):
    """Common oracle/diffusion phase of the controllable-oracle exact search."""
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0, 1), got {lam!r}")
    if k < 1:
        raise DomainError(f"k must be positive, got {k!r}")
    arg = math.sin(math.pi / (4 * k + 2)) / math.sqrt(lam)
    if abs(arg - 1.0) <= 4 * np.finfo(float).eps:
        arg = 1.0
    if arg > 1.0:
        raise DomainError(f"theta0 undefined: k={k} is too small for lambda={lam!r}")
    return 2.0 * math.asin(arg)


def std_success(lam):
    """Success probability of standard Grover search after k'_opt iterations."""
    k = k_prime_opt(lam)
    return math.sin((k + 0.5) * _polar_angle(lam)) ** 2


def query_plan(lam):
    k = k_opt(lam)
    try:
        t0 = theta0(lam, k)
    except DomainError:
        t0 = None
    return QueryPlan(k, k_prime_opt(lam), _polar_angle(lam), t0)


def _chebyshev_u(j, x):
    """U_{j-1}(x) = sin(j phi)/sin(phi) for x = cos(phi); zero when j == 0."""
    x = np.asarray(x, dtype=float)
    if j == 0:
        return np.zeros_like(x)
    prev, cur = np.zeros_like(x), np.ones_like(x)
    for _ in range(j - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def _phase_geometry(theta1, theta2, lam, j):
    s1, s2 = math.sin(theta1 / 2), math.sin(theta2 / 2)
    cos_phi = math.cos((theta1 + theta2) / 2) + 8 * lam * (1 - lam) * s1 * s2
    cos_phi = min(1.0, max(-1.0, cos_phi))
    phi = math.acos(cos_phi)
    return s1, s2, math.cos(j * phi), float(_chebyshev_u(j, cos_phi))


def _combine(lead, coeff, cos_j, u, cleared):
    # lead + coeff * tan(j phi)/sin(phi), with tan(j phi)/sin(phi) = U_{j-1}/cos(j phi)
    if cleared:
        return lead * cos_j + coeff * u
    if abs(cos_j) < 1e-15:
        raise PoleError("tan(j*phi) pole in phase condition")
    return lead + coeff * u / cos_j


def residual_even(theta1, theta2, lam, k, cleared=False):
    """Closed-form phase conditions for an even query count (oracle phase pi).

    With ``cleared=True`` the first condition is multiplied by cos(k phi/2)
    and the second by cos(theta1/2) cos(theta2/2), which removes every pole
    without introducing roots at sin(phi) = 0.
    """
    if k < 2 or k % 2:
        raise DomainError(f"residual_even needs an even k >= 2, got {k!r}")
    if not 0.0 < lam < 0.5:
        raise DomainError(f"lambda must lie in (0, 1/2), got {lam!r}")
    s1, s2, cos_j, u = _phase_geometry(theta1, theta2, lam, k // 2)
    first = _combine(1.0, 4 * lam * (1 - 2 * lam) * s1 * s2, cos_j, u, cleared)
    c1, c2 = math.cos(theta1 / 2), math.cos(theta2 / 2)
    if cleared:
        second = (1 - 4 * lam) * s1 * c2 + c1 * s2
    else:
        if abs(c1) < 1e-15 or abs(c2) < 1e-15:
            raise PoleError("tan(theta/2) pole in phase condition")
        second = (1 - 4 * lam) * s1 / c1 + s2 / c2
    return first, second


def residual_odd(theta1, theta2, lam, k, cleared=False):
    """Closed-form phase conditions for an odd query count (oracle phase pi).

    ``cleared=True`` multiplies both conditions by cos((k-1) phi/2).
    """
    if k < 1 or k % 2 == 0:
        raise DomainError(f"residual_odd needs an odd k >= 1, got {k!r}")
    if not 0.0 < lam < 0.5:
        raise DomainError(f"lambda must lie in (0, 1/2), got {lam!r}")
    s1, s2, cos_j, u = _phase_geometry(theta1, theta2, lam, (k - 1) // 2)
    a = 1 - 2 * lam
    ct1, st1 = math.cos(theta1), math.sin(theta1)
    lead1 = 2 * lam + a * ct1
    coeff1 = -a * s1 * (
        st1 * math.cos(theta2 / 2)
        + (1 + 4 * lam - 8 * lam**2 + (1 - 8 * lam + 8 * lam**2) * ct1) * s2
    )
    lead2 = a * st1
    coeff2 = (
        a * (8 * lam * (1 - lam) * s1 * st1 * s2 + ct1 * math.sin((theta1 + theta2) / 2))
        - 2 * lam * math.sin((theta1 - theta2) / 2)
    )
    return (
        _combine(lead1, coeff1, cos_j, u, cleared),
        _combine(lead2, coeff2, cos_j, u, cleared),
    )


def residual_generic(theta1, theta2, lam, alpha, k):
    """``(Re, Im)`` of ``<R|psi_f>`` after fixing the global phase.

    The phase convention is that of :func:`d2p.subspace.bloch_coords`: the
    larger amplitude is made real and non-negative.
    """
    s = subspace.final_state(lam, alpha, theta1, theta2, k)
    r = s.a_R * complex(subspace.canonical_phase(s.a_R, s.a_T))
    return r.real, r.imag


def _smooth_residual(lam, alpha, k, x):
    # a_R with the phase of a_T removed; agrees with residual_generic whenever
    # |a_T| >= |a_R|, and stays differentiable away from that region.
    a_R, a_T = subspace.final_amplitudes(lam, alpha, x[..., 0], x[..., 1], k)
    mag = np.abs(a_T)
    r = a_R * np.conj(a_T) / np.where(mag > 0, mag, 1.0)
    return np.stack([r.real, r.imag], axis=-1)


_LINE_SEARCH = 0.5 ** np.arange(12)


def _newton(fun, x0):
    """Damped Newton on a batch of 2-D starting points.

    Returns final points and residual norms; a point counts as converged once
    its norm is below ``ACCEPT_TOL``.
    """
    x = np.array(x0, dtype=float).reshape(-1, 2)
    F = fun(x)
    norm = np.linalg.norm(F, axis=-1)
    active = norm >= STOP_TOL
    eye = np.eye(2) * FD_STEP
    for _ in range(MAX_NEWTON_STEPS):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        xa, Fa, na = x[idx], F[idx], norm[idx]
        probes = np.concatenate([xa + eye[0], xa - eye[0], xa + eye[1], xa - eye[1]])
        Fp = fun(probes).reshape(4, idx.size, 2)
        J = np.stack([Fp[0] - Fp[1], Fp[2] - Fp[3]], axis=-1) / (2 * FD_STEP)
        step = -np.einsum("bij,bj->bi", np.linalg.pinv(J), Fa)
        cand = xa[None] + _LINE_SEARCH[:, None, None] * step[None]
        Fc = fun(cand.reshape(-1, 2)).reshape(_LINE_SEARCH.size, idx.size, 2)
        nc = np.linalg.norm(Fc, axis=-1)
        ok = nc <= (1 - 1e-4 * _LINE_SEARCH[:, None]) * na[None]
        moved = ok.any(axis=0)
        first = np.argmax(ok, axis=0)
        cols = np.arange(idx.size)
        upd = idx[moved]
        x[upd] = cand[first[moved], cols[moved]]
        F[upd] = Fc[first[moved], cols[moved]]
        norm[upd] = nc[first[moved], cols[moved]]
        active[idx[~moved]] = False
        active[upd] = norm[upd] >= STOP_TOL
    return x, norm


def wrap_angle(theta):
    """Representative of ``theta`` modulo 2 pi in (-pi, pi]."""
    return float(math.pi - (math.pi - theta) % (2 * math.pi))


def _angular_distance(a, b):
    d = np.abs((np.asarray(a) - b) % (2 * np.pi))
    return np.minimum(d, 2 * np.pi - d)


def _reference_guess(lam, k):
    try:
        t0 = theta0(lam, k)
    except DomainError:
        t0 = math.pi
    return t0


def _validate(lam, k):
    if not 0.0 < lam <= 0.25:
        if 0.25 < lam < 1.0:
            raise DomainError(f"lambda={lam!r}: {LARGE_LAMBDA_MESSAGE}")
        raise DomainError(f"lambda must lie in (0, 1/4], got {lam!r}")
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")


def _provably_unsolvable(lam, alpha, k):
    """True when a dense scan certifies that |<R|psi_f>| has no zero.

    Each phase enters at most ceil(k/2) iterates and d S_r / d beta has unit
    norm, so |a_R| is Lipschitz with constant ceil(k/2) in theta1 and
    floor(k/2) in theta2.  Every point of the torus lies within h/2 of a grid
    node in both coordinates, hence |a_R| >= |a_R(node)| - k h / 2 on its
    cell.  Cells that cannot be excluded are split into four and rechecked.
    """
    w = np.pi / EXCLUSION_GRID
    g = -np.pi + 2 * w * np.arange(EXCLUSION_GRID)
    centers = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)
    offsets = np.array([[-1, -1], [-1, 1], [1, -1], [1, 1]]) * 0.5
    for _ in range(EXCLUSION_DEPTH):
        a_R, _ = subspace.final_amplitudes(lam, alpha, centers[:, 0], centers[:, 1], k)
        mag = np.abs(a_R)
        keep = mag <= k * w
        if not keep.any():
            return True
        # a near-zero sample means a root is almost certainly present
        if mag.min() < 1e-6 or keep.sum() > EXCLUSION_MAX_CELLS // 4:
            return False
        centers = (centers[keep][:, None, :] + w * offsets[None]).reshape(-1, 2)
        w /= 2
    return False


def _try_solve(lam, k, alpha):
    """Newton from (theta0, -theta0), then the multistart grid; None on failure."""
    t0 = _reference_guess(lam, k)

    def fun(x):
        return _smooth_residual(lam, alpha, k, x)

    x, norm = _newton(fun, [t0, -t0])
    if norm[0] < ACCEPT_TOL:
        best = x[0]
    elif _provably_unsolvable(lam, alpha, k):
        return None
    else:
        g = -np.pi + 2 * np.pi * (np.arange(MULTISTART_GRID) + 1) / MULTISTART_GRID
        starts = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)
        x, norm = _newton(fun, starts)
        good = np.flatnonzero(norm < ACCEPT_TOL)
        if good.size == 0:
            return None
        score = _angular_distance(x[good, 0], t0) + _angular_distance(x[good, 1], -t0)
        best = x[good[np.argmin(score)]]
    theta1, theta2 = wrap_angle(best[0]), wrap_angle(best[1])
    res = float(np.hypot(*residual_generic(theta1, theta2, lam, alpha, k)))
    if res >= ACCEPT_TOL:
        return None
    return PhaseSchedule(float(lam), float(alpha), int(k), theta1, theta2, res)


def solve(lam, k=None, alpha=math.pi):
    """Two diffusion phases that make ``k`` queries succeed with certainty.

    ``k`` defaults to :func:`k_opt`.  For ``alpha == pi`` a schedule exists for
    every ``k >= k_opt(lam)``; for other oracle phases a larger ``k`` may be
    needed and :class:`NoConvergence` signals that ``k`` is too small.
    """
    if k is None:
        k = k_opt(lam) if 0.0 < lam <= 0.25 else 1
    _validate(lam, k)
    if alpha == math.pi and k < k_opt(lam):
        raise DomainError(f"k={k} is below k_opt={k_opt(lam)} for lambda={lam!r}")
    sched = _try_solve(lam, k, alpha)
    if sched is None:
        raise NoConvergence(
            f"no schedule with residual < {ACCEPT_TOL:g} for lambda={lam!r}, k={k}, alpha={alpha!r}"
        )
    return sched


def solve_min_k(lam, alpha, k_cap=None):
    """Schedule with the fewest queries for a fixed oracle phase.

    Each iterate raises the polar angle on the Bloch sphere by at most twice
    the initial polar angle, whatever the phases, so no ``k < k_opt(lam)`` can
    reach the marked state and the search starts there.
    """
    _validate(lam, 1)
    k_min = k_opt(lam)
    if k_cap is None:
        k_cap = 8 * k_min
    for k in range(k_min, k_cap + 1):
        sched = _try_solve(lam, k, alpha)
        if sched is not None:
            return sched
    raise NoConvergence(f"no schedule with k <= {k_cap} for lambda={lam!r}, alpha={alpha!r}")


def printed_equation_report(schedules, tol=1e-6):
    """Pole-cleared closed-form conditions at solved oracle-phase-pi schedules.

    Returns one message per schedule whose closed-form residual exceeds ``tol``;
    an empty list means the closed forms agree with the solver everywhere.
    """
    report = []
    for s in schedules:
        if s.alpha != math.pi:
            continue
        check = residual_even if s.k % 2 == 0 else residual_odd
        r = check(s.theta1, s.theta2, s.lam, s.k, cleared=True)
        if max(abs(r[0]), abs(r[1])) > tol:
            report.append(
                f"lambda={s.lam!r} k={s.k}: closed-form residual ({r[0]:.3e}, {r[1]:.3e})"
            )
    return report
