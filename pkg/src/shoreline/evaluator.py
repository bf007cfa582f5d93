"""Adversarial competitive-ratio sweep.

The worst-case line for a fleet can be found direction by direction.  Fix a
direction theta and let h(t) be the running maximum, over robots and over
time, of the support reached in that direction.  A line at offset delta in
direction theta is first hit when h crosses delta, so along each direction
the adversary's best offsets sit just past the values where h set a new
record: place the line at delta = m + 0 for a record value m and the fleet
pays the time of the *next* record divided by m.

Records are therefore stored as (break_time, value) pairs: value is the
running maximum the segment reaches, and break_time is the instant the
previous record value was first exceeded (bisected within one grid step).
With that convention the pair ratio next_time / value is exact for
piecewise-linear supports rather than inflated by one grid step, which is
what keeps ray fleets accurate at the default grids.  Offsets below epsilon
are excluded (any start inside radius epsilon trivializes the ratio); the
first eligible record also contributes a boundary ratio against
max(epsilon, previous value).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .geometry import Line, normalize_angle
from .trajectory import Fleet, TrajectorySpec, positions

DEFAULT_THETA_STEPS = 720
DEFAULT_T_STEPS = 4096
# Fraction of the horizon below which adversary offsets are ignored.
DEFAULT_EPSILON_FACTOR = 1e-3
RECORD_TIME_TOL_FACTOR = 1e-9
# How many leading sweep candidates get their numerator re-bisected.
POLISH_TOP = 8


class UncoveredDirectionError(ValueError):
    """A direction whose coverage never reached the required offset."""

    def __init__(self, message: str, theta: float):
        super().__init__(message)
        self.theta = theta


@dataclass
class DirectionProfile:
    theta: float
    times: np.ndarray
    values: np.ndarray
    coverage: float

    @property
    def records(self) -> list[tuple[float, float]]:
        return list(zip(self.times.tolist(), self.values.tolist()))


@dataclass
class CRReport:
    cr_estimate: float
    witness: Line
    witness_time: float
    coverage_radius: float
    horizon: float
    theta_steps: int
    t_steps: int
    epsilon: float
    window: tuple[float, float] | None = None
    spacing: str = "uniform"
    profiles: list[DirectionProfile] | None = field(default=None, repr=False)


def _time_grid(horizon: float, t_steps: int, spacing: str, t_start: float) -> np.ndarray:
    if horizon <= 0.0:
        raise ValueError("horizon must be positive")
    if t_steps < 2:
        raise ValueError("t_steps must be at least 2")
    if spacing == "uniform":
        return np.linspace(t_start, horizon, t_steps)
    if spacing == "geometric":
        if t_start <= 0.0:
            raise ValueError("geometric spacing needs t_start > 0")
        return np.geomspace(t_start, horizon, t_steps)
    raise ValueError(f"unknown spacing {spacing!r}")


def _fleet_support_matrix(fleet: Fleet, ts: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """(len(ts), len(thetas)) matrix of max-over-robots support."""
    U = np.stack([np.cos(thetas), np.sin(thetas)], axis=0)
    out: np.ndarray | None = None
    for robot in fleet.robots:
        s = positions(robot, ts) @ U
        out = s if out is None else np.maximum(out, s, out=out)
    return out


def _fleet_support_at(fleet: Fleet, ts: np.ndarray, theta: float) -> np.ndarray:
    u = np.array([math.cos(theta), math.sin(theta)])
    out: np.ndarray | None = None
    for robot in fleet.robots:
        s = positions(robot, ts) @ u
        out = s if out is None else np.maximum(out, s)
    return out


def _extract_records(
    h: np.ndarray, ts: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Record grid indices, values, break levels, and secant break times."""
    running = np.maximum.accumulate(h)
    prev = np.concatenate(([0.0], running[:-1]))
    mask = h > prev
    idx = np.nonzero(mask)[0]
    vals = h[idx]
    levels = prev[idx]  # value that was beaten; 0 for the first record
    times = ts[idx].astype(float)
    inner = idx > 0
    ii = idx[inner]
    h_lo = h[ii - 1]
    denom = h[ii] - h_lo
    frac = np.clip((levels[inner] - h_lo) / denom, 0.0, 1.0)
    times[inner] = ts[ii - 1] + frac * (ts[ii] - ts[ii - 1])
    return idx, vals, levels, times


def _bisect_levels(
    fleet: Fleet,
    theta: float,
    lo: np.ndarray,
    hi: np.ndarray,
    levels: np.ndarray,
    tol: float,
) -> np.ndarray:
    """Earliest times at which fleet support exceeds the given levels.

    Brackets must satisfy h(lo) <= level < h(hi); returns the hi ends after
    shrinking every bracket below tol.
    """
    lo = lo.astype(float).copy()
    hi = hi.astype(float).copy()
    # 60 halvings would overshoot double precision; loop exits on width.
    for _ in range(64):
        width = hi - lo
        if not np.any(width > tol):
            break
        mid = 0.5 * (lo + hi)
        hm = _fleet_support_at(fleet, mid, theta)
        above = hm > levels
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return hi


def direction_profile(
    fleet: Fleet,
    theta: float,
    horizon: float,
    t_steps: int = DEFAULT_T_STEPS,
    *,
    spacing: str = "uniform",
    t_start: float = 0.0,
) -> DirectionProfile:
    """Running-max support records along one direction.

    Every record time is refined by bisection to within 1e-9 * horizon of
    the true instant the previous record value was exceeded.
    """
    theta = normalize_angle(theta)
    ts = _time_grid(horizon, t_steps, spacing, t_start)
    h = _fleet_support_at(fleet, ts, theta)
    idx, vals, levels, times = _extract_records(h, ts)
    if idx.size:
        inner = idx > 0
        ii = idx[inner]
        tol = RECORD_TIME_TOL_FACTOR * horizon
        times = times.copy()
        times[inner] = _bisect_levels(
            fleet, theta, ts[ii - 1], ts[ii], levels[inner], tol
        )
    coverage = float(vals[-1]) if vals.size else 0.0
    return DirectionProfile(theta=theta, times=times, values=vals, coverage=coverage)


def _ratio_core(
    times: np.ndarray,
    values: np.ndarray,
    epsilon: float,
    window: tuple[float, float] | None,
) -> tuple[float, float, float, int] | None:
    """Best adversary ratio from record arrays.

    Returns (ratio, witness_delta, numerator_time, numerator_record_index)
    or None when no record is eligible.
    """
    if values.size == 0:
        return None
    lo = epsilon
    hi = math.inf
    if window is not None:
        lo = max(lo, window[0])
        hi = window[1]
    elig = np.nonzero((values >= lo) & (values <= hi))[0]
    if elig.size == 0:
        return None
    best: tuple[float, float, float, int] | None = None
    k0 = int(elig[0])
    m0 = max(lo, float(values[k0 - 1])) if k0 > 0 else lo
    boundary = (float(times[k0]) / m0, m0, float(times[k0]), k0)
    best = boundary
    pair_ks = elig[elig + 1 < values.size]
    if pair_ks.size:
        ratios = times[pair_ks + 1] / values[pair_ks]
        j = int(np.argmax(ratios))
        k = int(pair_ks[j])
        cand = (float(ratios[j]), float(values[k]), float(times[k + 1]), k + 1)
        if cand[0] > best[0]:
            best = cand
    return best


def records_to_ratio(
    profile: DirectionProfile,
    epsilon: float,
    window: tuple[float, float] | None = None,
) -> tuple[float, float, float]:
    """Worst hit-time / offset ratio encoded by a profile.

    Considers each record value m at or above epsilon as a line offset m+0
    (paid at the next record's break time) plus the boundary line just above
    max(epsilon, value preceding the first eligible record).
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    got = _ratio_core(profile.times, profile.values, epsilon, window)
    if got is None:
        raise UncoveredDirectionError(
            f"direction uncovered: no record at or above epsilon={epsilon:g} "
            f"for theta={profile.theta:.6f}",
            profile.theta,
        )
    ratio, delta, time, _ = got
    return ratio, delta, time


def evaluate_cr(
    fleet: Fleet,
    horizon: float,
    theta_steps: int = DEFAULT_THETA_STEPS,
    t_steps: int = DEFAULT_T_STEPS,
    epsilon: float | None = None,
    window: tuple[float, float] | None = None,
    *,
    spacing: str = "uniform",
    t_start: float = 0.0,
    keep_profiles: bool = False,
    workers: int | None = None,
) -> CRReport:
    """Competitive-ratio estimate: max adversary ratio over a theta grid.

    Record break times come from a vectorized secant pass; the leading
    candidates are then re-bisected against the true support before the
    final max, so the reported witness satisfies
    cr_estimate = witness_time / witness.delta to high precision.

    Raises UncoveredDirectionError when any direction's coverage stays below
    epsilon (the fleet does not solve the problem within the horizon), or
    when a measurement window captures no records for some direction.
    """
    if theta_steps < 1:
        raise ValueError("theta_steps must be at least 1")
    if epsilon is None:
        epsilon = DEFAULT_EPSILON_FACTOR * horizon
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    if window is not None:
        w_lo, w_hi = float(window[0]), float(window[1])
        if not 0.0 < w_lo < w_hi:
            raise ValueError("window must satisfy 0 < lo < hi")
        window = (w_lo, w_hi)
    if workers is None:
        workers = int(os.environ.get("SHORELINE_WORKERS", "1") or "1")
    workers = max(1, workers)

    ts = _time_grid(horizon, t_steps, spacing, t_start)
    thetas = np.arange(theta_steps) * (2.0 * math.pi / theta_steps)
    H = _fleet_support_matrix(fleet, ts, thetas)

    coverage_radius = math.inf
    profiles: list[DirectionProfile] | None = [] if keep_profiles else None
    # candidate: (ratio, theta, delta, time, bracket_lo, bracket_hi, level)
    candidates: list[tuple[float, float, float, float, float, float, float]] = []

    def scan(j: int) -> tuple[float, DirectionProfile | None, tuple]:
        theta = float(thetas[j])
        h = H[:, j]
        idx, vals, levels, times = _extract_records(h, ts)
        coverage = float(vals[-1]) if vals.size else 0.0
        if coverage < epsilon:
            raise UncoveredDirectionError(
                f"direction theta={theta:.6f} uncovered: coverage "
                f"{coverage:.6g} < epsilon {epsilon:.6g} within horizon",
                theta,
            )
        got = _ratio_core(times, vals, epsilon, window)
        if got is None:
            raise UncoveredDirectionError(
                f"direction theta={theta:.6f} has no records inside the "
                f"measurement window {window}",
                theta,
            )
        ratio, delta, time, num_k = got
        g = int(idx[num_k])
        if g > 0:
            cand = (ratio, theta, delta, time, float(ts[g - 1]), float(ts[g]),
                    float(levels[num_k]))
        else:
            cand = (ratio, theta, delta, time, float(ts[0]), float(ts[0]),
                    float(levels[num_k]))
        prof = None
        if keep_profiles:
            prof = DirectionProfile(theta=theta, times=times, values=vals,
                                    coverage=coverage)
        return coverage, prof, cand

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(scan, range(theta_steps)))
    else:
        results = [scan(j) for j in range(theta_steps)]

    for coverage, prof, cand in results:
        coverage_radius = min(coverage_radius, coverage)
        if profiles is not None and prof is not None:
            profiles.append(prof)
        candidates.append(cand)

    candidates.sort(key=lambda c: c[0], reverse=True)
    tol = RECORD_TIME_TOL_FACTOR * horizon
    best_ratio, best_theta, best_delta, best_time = -math.inf, 0.0, 0.0, 0.0
    for ratio, theta, delta, time, blo, bhi, level in candidates[:POLISH_TOP]:
        if bhi > blo:
            t_ref = _bisect_levels(
                fleet, theta, np.array([blo]), np.array([bhi]),
                np.array([level]), tol,
            )
            time = float(t_ref[0])
            ratio = time / delta
        if ratio > best_ratio:
            best_ratio, best_theta, best_delta, best_time = ratio, theta, delta, time

    return CRReport(
        cr_estimate=best_ratio,
        witness=Line(best_theta, best_delta),
        witness_time=best_time,
        coverage_radius=float(coverage_radius),
        horizon=float(horizon),
        theta_steps=theta_steps,
        t_steps=t_steps,
        epsilon=float(epsilon),
        window=window,
        spacing=spacing,
        profiles=profiles,
    )
