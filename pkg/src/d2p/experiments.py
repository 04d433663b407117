"""Sweeps over the marked fraction and the oracle phase, and table export."""

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import partial
from typing import Optional

import numpy as np

from . import solver, subspace
from .errors import DomainError, NoConvergence

COLUMNS = (
    "lambda",
    "alpha",
    "k",
    "k_opt",
    "k_prime_opt",
    "theta0",
    "theta1",
    "theta2",
    "success_d2p",
    "success_std",
    "residual_norm",
    "status",
)
TRAJECTORY_COLUMNS = ("step", "x", "y", "z")


@dataclass(frozen=True)
class SweepRecord:
    lam: float
    alpha: float
    k: Optional[int]
    k_opt: int
    k_prime_opt: int
    theta0: Optional[float]
    theta1: float
    theta2: float
    success_d2p: float
    success_std: float
    residual_norm: float
    status: str = "ok"

    @property
    def solved(self):
        return self.status == "ok"

    def as_row(self):
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return {c: d[c] for c in COLUMNS}


def default_lambda_grid(points=200, lo=2.0**-16, hi=0.25):
    return list(np.geomspace(lo, hi, points))


def default_alpha_grid(points=721):
    """``points`` angles evenly spaced strictly inside (0, 2 pi).

    With an odd count the middle entry is exactly pi.
    """
    return [math.pi * (2 * j / (points + 1)) for j in range(1, points + 1)]


def _record(lam, alpha, plan, sched=None, error=None):
    if sched is None:
        return SweepRecord(
            lam, alpha, None, plan.k_opt, plan.k_prime_opt, plan.theta0,
            math.nan, math.nan, math.nan, solver.std_success(lam), math.nan,
            status=f"failed: {error}",
        )
    return SweepRecord(
        lam, alpha, sched.k, plan.k_opt, plan.k_prime_opt, plan.theta0,
        sched.theta1, sched.theta2, sched.success, solver.std_success(lam),
        sched.residual_norm,
    )


def _lambda_point(lam, alpha):
    lam = float(lam)
    plan = solver.query_plan(lam)
    try:
        sched = solver.solve(lam, plan.k_opt, alpha)
    except NoConvergence as e:
        return _record(lam, alpha, plan, error=e)
    return _record(lam, alpha, plan, sched)


def _alpha_point(alpha, lam, k_cap):
    alpha = float(alpha)
    plan = solver.query_plan(lam)
    try:
        sched = solver.solve_min_k(lam, alpha, k_cap)
    except NoConvergence as e:
        return _record(lam, alpha, plan, error=e)
    return _record(lam, alpha, plan, sched)


def _map(fn, items, workers):
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def sweep_lambda(lambda_grid=None, alpha=math.pi, workers=1):
    """One record per marked fraction, solved at ``k_opt``.

    Points that fail to converge become rows with ``status`` set and NaN
    phases; the sweep itself never aborts on them.
    """
    grid = default_lambda_grid() if lambda_grid is None else list(lambda_grid)
    for lam in grid:
        if not 0.0 < lam <= 0.25:
            raise DomainError(f"sweep needs 0 < lambda <= 1/4, got {lam!r}")
    return _map(partial(_lambda_point, alpha=float(alpha)), grid, workers)


def sweep_alpha(lam, alpha_grid=None, k_cap=None, workers=1):
    """Minimal query count and phases for each oracle phase at fixed ``lam``."""
    if not 0.0 < lam <= 0.25:
        raise DomainError(f"sweep needs 0 < lambda <= 1/4, got {lam!r}")
    grid = default_alpha_grid() if alpha_grid is None else list(alpha_grid)
    return _map(partial(_alpha_point, lam=float(lam), k_cap=k_cap), grid, workers)


def schedule_trajectory(schedule):
    return subspace.trajectory(
        schedule.lam, schedule.alpha, schedule.theta1, schedule.theta2, schedule.k
    )


def verify_record(rec):
    """Re-check a solved row against the 2x2 model; raises ValueError if stale."""
    if not rec.solved:
        return
    res = math.hypot(*solver.residual_generic(rec.theta1, rec.theta2, rec.lam, rec.alpha, rec.k))
    s = subspace.final_state(rec.lam, rec.alpha, rec.theta1, rec.theta2, rec.k)
    if res >= solver.ACCEPT_TOL or s.success < 1 - 1e-9 or abs(s.a_R) >= 1e-9:
        raise ValueError(f"record for lambda={rec.lam!r}, alpha={rec.alpha!r} fails re-verification")


def _rows(records):
    rows = []
    for i, r in enumerate(records):
        if isinstance(r, SweepRecord):
            verify_record(r)
            rows.append(r.as_row())
        elif isinstance(r, subspace.BlochVector):
            rows.append({"step": i, "x": r.x, "y": r.y, "z": r.z})
        else:
            raise TypeError(f"cannot export {type(r).__name__}")
    return rows


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.17g}"
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def render(records, fmt="csv", columns=None):
    """Serialize sweep records or Bloch points to CSV or JSON text."""
    rows = _rows(records)
    if columns is None:
        if records and isinstance(records[0], subspace.BlochVector):
            columns = TRAJECTORY_COLUMNS
        else:
            columns = COLUMNS
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_csv_cell(row[c]) for c in columns])
        return buf.getvalue()
    if fmt == "json":
        data = [{c: _json_value(row[c]) for c in columns} for row in rows]
        return json.dumps(data, indent=2) + "\n"
    raise DomainError(f"unknown format {fmt!r}; use 'csv' or 'json'")


def export(records, path, fmt="csv", columns=None):
    text = render(records, fmt, columns)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        raise OSError(e.errno, f"cannot write {path}: {e.strerror}") from e
    return path
