"""Quantitative checks of the oscillation law for the signed distance.

Along a zero-angular-momentum solution the signed distance S to the
degeneration locus obeys d2S/dt2 = -S g with g > 0, and g >= G M delta(c)
whenever all pair distances stay below c.  Consequently S is concave where
positive, convex where negative, and crosses zero at least once in every
time window of length pi / sqrt(G M delta(c)).  This module estimates g from
sampled trajectories, checks the sign pattern of the second differences per
constant-sign segment, sweeps the window bound against detected events, and
probes the first-order part of g analytically along straight lines normal to
the locus.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import Trajectory
from .errors import InputError, RankDeficiencyError
from .linalg import signed_distance
from .potentials import PairPotential, acceleration, delta_bound
from .reduction import (
    MassSystem,
    angular_momentum,
    angular_momentum_norm,
    center_of_mass,
    mass_norm,
    reduce_configuration,
)

__all__ = [
    "GEstimate",
    "SegmentCheck",
    "SegmentReport",
    "OscillationReport",
    "NormalGeodesicProbe",
    "estimate_g_series",
    "check_concavity_segments",
    "check_window_bound",
    "normal_geodesic_probe",
    "second_derivative_5pt",
    "find_empty_windows",
]

# Default masking thresholds, relative to the configuration scale: g = -S''/S
# is ill-conditioned near zeros of S and near the non-smooth locus.
EPS_S_RTOL = 1e-3
EPS_MARGIN_RTOL = 1e-3


def second_derivative_5pt(values, h):
    """Five-point central second derivative of a uniformly sampled series.

    Returns an array two entries shorter on each side than the input.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 5:
        raise InputError("need at least five samples for the stencil")
    return (
        -values[:-4] + 16 * values[1:-3] - 30 * values[2:-2] + 16 * values[3:-1] - values[4:]
    ) / (12.0 * h * h)


def _uniform_count(times, h):
    """Number of leading samples spaced by h (a truncated run appends one
    off-grid node at the end)."""
    n = times.size
    if n < 2:
        return n
    gaps = np.diff(times)
    bad = np.nonzero(np.abs(gaps - h) > 1e-9 * h)[0]
    return n if bad.size == 0 else int(bad[0]) + 1


@dataclass
class GEstimate:
    """Pointwise estimate of g = -S''/S on the interior sample grid.

    `mask` is True where the estimate is trustworthy (|S| and the singular
    margin both above their thresholds); g is NaN elsewhere.  `lower_bound`
    is G M delta at the observed distance bound; it only binds when
    `nonzero_am` is False.
    """

    times: np.ndarray
    g: np.ndarray
    mask: np.ndarray
    lower_bound: float
    c_observed: float
    eps_s: float
    eps_margin: float
    nonzero_am: bool


def estimate_g_series(traj: Trajectory, eps_s=None, eps_margin=None) -> GEstimate:
    """Estimate g along a run by 5-point differencing of the sampled S."""
    h = traj.config.sample_interval
    n = _uniform_count(traj.times, h)
    if n < 5:
        raise InputError("trajectory too short for the 5-point stencil")

    scale = float(traj.config_norm.max())
    eps_s = EPS_S_RTOL * scale if eps_s is None else eps_s
    eps_margin = EPS_MARGIN_RTOL * scale if eps_margin is None else eps_margin

    s = traj.S[:n]
    sdd = second_derivative_5pt(s, h)
    s_mid = s[2:-2]
    mask = (np.abs(s_mid) > eps_s) & (traj.margin[2 : n - 2] > eps_margin)

    g = np.full_like(s_mid, np.nan)
    g[mask] = -sdd[mask] / s_mid[mask]

    c_obs = float(traj.r_max.max())
    lower = traj.m.G * traj.m.total_mass * delta_bound(traj.potential, c_obs)
    return GEstimate(
        times=traj.times[2 : n - 2],
        g=g,
        mask=mask,
        lower_bound=float(lower),
        c_observed=c_obs,
        eps_s=float(eps_s),
        eps_margin=float(eps_margin),
        nonzero_am=not traj.conservation.initially_zero_am,
    )


@dataclass
class SegmentCheck:
    t_lo: float
    t_hi: float
    sign: int
    n_nodes: int
    n_ok: int
    passed: bool

    @property
    def fraction(self):
        return self.n_ok / self.n_nodes if self.n_nodes else 1.0

    def as_dict(self):
        return {
            "t_lo": self.t_lo,
            "t_hi": self.t_hi,
            "sign": self.sign,
            "n_nodes": self.n_nodes,
            "n_ok": self.n_ok,
            "fraction": self.fraction,
            "passed": self.passed,
        }


@dataclass
class SegmentReport:
    segments: list
    n_skipped: int
    min_fraction: float

    @property
    def passed(self):
        return all(seg.passed for seg in self.segments)

    def as_dict(self):
        return {
            "segments": [s.as_dict() for s in self.segments],
            "n_skipped": self.n_skipped,
            "min_fraction": self.min_fraction,
            "passed": self.passed,
        }


def check_concavity_segments(traj: Trajectory, events=None, min_fraction=0.99, guard_nodes=6) -> SegmentReport:
    """Check sign(S'') = -sign(S) on each maximal constant-sign segment.

    Segment boundaries come from the sign-change events (non-grazing).  A
    guard band of `guard_nodes` samples is dropped at both ends of every
    segment, where the discrete second difference straddles the crossing.
    Segments with fewer than three surviving nodes are skipped, not failed.
    """
    h = traj.config.sample_interval
    n = _uniform_count(traj.times, h)
    times = traj.times[:n]
    s = traj.S[:n]

    if events is None:
        flips = np.nonzero(np.sign(s[:-1]) * np.sign(s[1:]) < 0)[0]
        cuts = [0.5 * (times[i] + times[i + 1]) for i in flips]
    else:
        cuts = [e.t_star for e in events if not e.grazing]
    bounds = [times[0]] + sorted(cuts) + [times[-1]]

    d2 = np.empty_like(s)
    d2[1:-1] = s[:-2] - 2 * s[1:-1] + s[2:]
    d2[0] = d2[-1] = np.nan

    segments = []
    n_skipped = 0
    for t_lo, t_hi in zip(bounds[:-1], bounds[1:]):
        lo_t = t_lo + guard_nodes * h
        hi_t = t_hi - guard_nodes * h
        idx = np.nonzero((times >= lo_t) & (times <= hi_t))[0]
        idx = idx[(idx >= 1) & (idx <= n - 2)]
        if idx.size < 3:
            n_skipped += 1
            continue
        sign = int(np.sign(np.median(s[idx])))
        if sign == 0:
            n_skipped += 1
            continue
        ok = int(np.sum(np.sign(d2[idx]) == -sign))
        segments.append(
            SegmentCheck(
                t_lo=float(t_lo),
                t_hi=float(t_hi),
                sign=sign,
                n_nodes=int(idx.size),
                n_ok=ok,
                passed=ok >= min_fraction * idx.size,
            )
        )
    return SegmentReport(segments=segments, n_skipped=n_skipped, min_fraction=min_fraction)


def _thread_cap():
    raw = os.environ.get("COPLANAR_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def find_empty_windows(t0, t1, event_times, window, step):
    """Start times of length-`window` windows in [t0, t1] with no event."""
    event_times = np.sort(np.asarray(event_times, dtype=float))
    if t1 - t0 < window:
        return np.empty(0)
    starts = np.arange(t0, t1 - window + 0.5 * step, step)
    if event_times.size == 0:
        return starts

    def empty_mask(chunk):
        idx = np.searchsorted(event_times, chunk, side="left")
        has = (idx < event_times.size) & (
            event_times[np.minimum(idx, event_times.size - 1)] <= chunk + window
        )
        return ~has

    workers = _thread_cap()
    if workers <= 1 or starts.size < 1024:
        mask = empty_mask(starts)
    else:
        chunks = np.array_split(starts, workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            mask = np.concatenate(list(pool.map(empty_mask, chunks)))
    return starts[mask]


@dataclass
class OscillationReport:
    """Window-bound sweep outcome for one run.

    `violations` lists merged [start, end] spans of windows without any
    event.  An empty list confirms the bound on this run; a non-empty list
    refutes nothing unless all hypothesis flags are clear.
    """

    c_observed: float
    delta: float
    omega: float
    window: float
    n_windows: int
    violations: list
    hypothesis_flags: dict = field(default_factory=dict)

    @property
    def hypotheses_met(self):
        return not any(self.hypothesis_flags.values())

    def as_dict(self):
        return {
            "c_observed": self.c_observed,
            "delta": self.delta,
            "omega": self.omega,
            "window": self.window,
            "n_windows": self.n_windows,
            "violations": [list(v) for v in self.violations],
            "hypothesis_flags": dict(self.hypothesis_flags),
            "hypotheses_met": self.hypotheses_met,
        }


def check_window_bound(traj: Trajectory, events, m: MassSystem = None, p: PairPotential = None) -> OscillationReport:
    """Slide the guaranteed window across the run and record empty windows.

    The window length uses the distance bound actually observed on the run
    (the max pair separation), never a promised one.  Hypothesis flags
    record why a violation would not contradict the oscillation law:
    nonzero angular momentum, suspected escape, or a collision-truncated
    run.
    """
    m = traj.m if m is None else m
    p = traj.potential if p is None else p

    c_obs = float(traj.r_max.max())
    delta = delta_bound(p, c_obs)
    omega = float(np.sqrt(m.G * m.total_mass * delta))
    window = float(np.pi / omega)

    t0, t1 = traj.t_span
    step = window / 100.0
    event_times = np.array([e.t_star for e in events])
    empty = find_empty_windows(t0, t1, event_times, window, step)
    n_windows = int(np.floor((t1 - t0 - window) / step)) + 1 if t1 - t0 >= window else 0

    violations = []
    if empty.size:
        run_start = empty[0]
        prev = empty[0]
        for s in empty[1:]:
            if s - prev > 1.5 * step:
                violations.append((float(run_start), float(prev + window)))
                run_start = s
            prev = s
        violations.append((float(run_start), float(prev + window)))

    r_max = traj.r_max
    unbounded = bool(r_max[-1] > 2.0 * r_max[0] and np.argmax(r_max) == r_max.size - 1)
    flags = {
        "nonzero_J": not traj.conservation.initially_zero_am,
        "unbounded_suspected": unbounded,
        "collision_truncated": bool(traj.truncated and traj.truncation_reason == "collision guard"),
    }
    return OscillationReport(
        c_observed=c_obs,
        delta=float(delta),
        omega=omega,
        window=window,
        n_windows=n_windows,
        violations=violations,
        hypothesis_flags=flags,
    )


@dataclass
class NormalGeodesicProbe:
    """Straight-line probe q0 + t v normal to the degeneration locus.

    All bodies of the planar base q0 move along the common normal axis with
    zero total momentum and zero angular momentum, so pair distances obey
    r_ab(t)^2 = r_ab(0)^2 + t^2 |v_ab|^2 exactly, the probe stays a shape
    geodesic, and S(t) = t near t = 0.  `g1_analytic` is
    G sum m_a m_b (f'(r_ab)/r_ab) |v_ab|^2; `g1_numeric` is the
    finite-difference estimate of <grad S, -grad V> / (-S).
    """

    q0: np.ndarray
    v: np.ndarray
    t_values: np.ndarray
    s_values: np.ndarray
    g1_analytic: np.ndarray
    g1_numeric: np.ndarray
    r_sq_max_error: float
    am_norm: float


def normal_geodesic_probe(q0, m: MassSystem, p: PairPotential, t_values, planar_rtol=1e-9) -> NormalGeodesicProbe:
    """Build the unit normal probe through a planar configuration q0."""
    q0 = np.asarray(q0, dtype=float)
    if q0.shape != (m.d, m.n_bodies):
        raise InputError(f"expected positions of shape {(m.d, m.n_bodies)}")
    q0 = q0 - center_of_mass(q0, m)[:, None]

    u, s, _ = np.linalg.svd(q0)
    if s[-1] > planar_rtol * s[0]:
        raise InputError("base configuration is not planar within tolerance")
    if s[-2] <= planar_rtol * s[0]:
        raise RankDeficiencyError("base configuration has corank >= 2; normal axis is not unique")
    axis = u[:, -1]

    # v_a = c_a * axis with sum m_a c_a = 0 (momentum) and
    # sum m_a c_a (q_a . u_i) = 0 for the in-plane directions (angular
    # momentum): a d-row system with a one-dimensional null space.
    rows = [m.masses]
    in_plane = u[:, :-1].T @ q0  # (d-1, N)
    for row in in_plane:
        rows.append(m.masses * row)
    a_mat = np.vstack(rows)
    _, _, vh = np.linalg.svd(a_mat)
    c = vh[-1]
    c = c / np.sqrt(np.sum(m.masses * c * c))
    v = np.outer(axis, c)

    scale = float(np.linalg.norm(reduce_configuration(q0, m)))
    probe_t = 1e-3 * max(scale, 1.0)
    if signed_distance(reduce_configuration(q0 + probe_t * v, m)) < 0:
        v = -v

    am = angular_momentum_norm(angular_momentum(q0, v, m))

    ia, ib = np.triu_indices(m.n_bodies, k=1)
    r0_sq = np.sum((q0[:, ia] - q0[:, ib]) ** 2, axis=0)
    v_sq = np.sum((v[:, ia] - v[:, ib]) ** 2, axis=0)
    mm = m.masses[ia] * m.masses[ib]

    t_values = np.asarray(t_values, dtype=float)
    r_sq = r0_sq[None, :] + t_values[:, None] ** 2 * v_sq[None, :]
    r_t = np.sqrt(r_sq)
    g1_analytic = m.G * np.sum(mm * p.fprime_over_r(r_t, ia, ib) * v_sq, axis=1)

    # Exactness check of the pair-distance law against direct geometry.
    r_sq_direct = np.array(
        [np.sum(((q0 + t * v)[:, ia] - (q0 + t * v)[:, ib]) ** 2, axis=0) for t in t_values]
    )
    denom = np.maximum(r_sq, 1e-300)
    r_sq_max_error = float(np.max(np.abs(r_sq_direct - r_sq) / denom)) if t_values.size else 0.0

    fd_h = 1e-5 * max(scale, 1.0)
    s_values = np.empty(t_values.size)
    g1_numeric = np.full(t_values.size, np.nan)
    for i, t in enumerate(t_values):
        qt = q0 + t * v
        s_t = signed_distance(reduce_configuration(qt, m))
        s_values[i] = s_t
        if s_t == 0.0:
            continue
        acc = acceleration(qt, m, p)
        eps = fd_h / max(mass_norm(acc, m), 1e-300)
        s_plus = signed_distance(reduce_configuration(qt + eps * acc, m))
        s_minus = signed_distance(reduce_configuration(qt - eps * acc, m))
        g1_numeric[i] = (s_plus - s_minus) / (2.0 * eps) / (-s_t)

    return NormalGeodesicProbe(
        q0=q0,
        v=v,
        t_values=t_values,
        s_values=s_values,
        g1_analytic=g1_analytic,
        g1_numeric=g1_numeric,
        r_sq_max_error=r_sq_max_error,
        am_norm=float(am),
    )
