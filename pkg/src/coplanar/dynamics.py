"""Time integration of the N-body equations with dense output.

The default integrator is an embedded adaptive Runge-Kutta 5(4) pair with a
free interpolant (scipy's RK45), which gives the event scanner a continuous
trajectory to refine roots on.  A fixed-step RK4 is kept for cross-checks.
Each run carries per-sample diagnostics -- energy, angular momentum, linear
momentum, pair-distance extremes, and the reduced-matrix quantities
(determinant, signed distance, singular margin) -- plus a conservation-drift
summary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import InputError, IntegrationError
from .potentials import PairPotential
from .reduction import MassSystem, _check_config

__all__ = ["State", "IntegratorConfig", "ConservationReport", "Trajectory", "integrate", "dense_eval"]

# Angular momentum below this times the run's J scale counts as zero.
ZERO_AM_RTOL = 1e-9


@dataclass(frozen=True)
class State:
    """Positions and velocities (each d x N) at one instant."""

    t: float
    q: np.ndarray
    v: np.ndarray


@dataclass
class IntegratorConfig:
    t_end: float
    sample_interval: float
    kind: str = "adaptive_embedded"
    rel_tol: float = 1e-10
    abs_tol: float | None = None  # default: rel_tol * initial state scale
    max_step: float = np.inf
    step: float | None = None  # fixed-step size, rk4_fixed only
    collision_radius: float | None = None  # default: 1e-6 * initial max r_ab

    def validate(self, t_start: float):
        if self.kind not in ("adaptive_embedded", "rk4_fixed"):
            raise InputError(f"unknown integrator kind {self.kind!r}")
        if self.t_end <= t_start:
            raise InputError("t_end must exceed the initial time")
        if self.sample_interval <= 0:
            raise InputError("sample_interval must be positive")
        if self.kind == "adaptive_embedded":
            if self.rel_tol <= 0 or (self.abs_tol is not None and self.abs_tol <= 0):
                raise InputError("tolerances must be positive")
        else:
            if self.step is None or self.step <= 0:
                raise InputError("rk4_fixed needs a positive step")


@dataclass
class ConservationReport:
    """Worst-case drifts of the conserved quantities along the samples."""

    energy_drift_rel: float
    am_max: float
    am_drift_rel: float | None  # None when the run starts with J = 0
    momentum_max: float
    initially_zero_am: bool

    def as_dict(self):
        return {
            "energy_drift_rel": self.energy_drift_rel,
            "am_max": self.am_max,
            "am_drift_rel": self.am_drift_rel,
            "momentum_max": self.momentum_max,
            "initially_zero_am": self.initially_zero_am,
        }


@dataclass
class Trajectory:
    """Sampled solution plus the integrator's dense interpolant.

    All arrays share the sample axis.  `S`, `det` and `margin` refer to the
    translation-reduced square matrix at each sample.
    """

    m: MassSystem
    potential: PairPotential
    config: IntegratorConfig
    times: np.ndarray
    qs: np.ndarray  # (n, d, N)
    vs: np.ndarray  # (n, d, N)
    energy: np.ndarray
    am: np.ndarray  # (n, d, d) skew matrices
    am_norm: np.ndarray
    momentum_norm: np.ndarray
    r_max: np.ndarray
    r_min_pair: np.ndarray
    S: np.ndarray
    det: np.ndarray
    margin: np.ndarray
    config_norm: np.ndarray  # Frobenius norm of the reduced matrix
    conservation: ConservationReport
    truncated: bool = False
    truncation_reason: str | None = None
    _dense: object = field(default=None, repr=False)

    @property
    def t_span(self):
        return float(self.times[0]), float(self.times[-1])

    def state(self, i) -> State:
        return State(t=float(self.times[i]), q=self.qs[i], v=self.vs[i])

    def dense_eval(self, t) -> State:
        t0, t1 = self.t_span
        if not (t0 <= t <= t1):
            raise InputError(f"t={t} outside the trajectory span [{t0}, {t1}]")
        y = self._dense(t)
        d, n = self.m.d, self.m.n_bodies
        return State(t=float(t), q=y[: d * n].reshape(d, n).copy(), v=y[d * n :].reshape(d, n).copy())


def dense_eval(traj: Trajectory, t) -> State:
    """Interpolated state at time t; exact at sample nodes."""
    return traj.dense_eval(t)


def _make_rhs(m: MassSystem, p: PairPotential):
    d, n = m.d, m.n_bodies
    masses = m.masses
    G = m.G

    def rhs(t, y):
        q = y[: d * n].reshape(d, n)
        v = y[d * n :]
        diff = q[:, None, :] - q[:, :, None]  # [i, a, b] = q_ib - q_ia
        r2 = np.einsum("iab,iab->ab", diff, diff)
        np.fill_diagonal(r2, 1.0)  # keep the diagonal out of the division
        g = p.fprime_over_r(np.sqrt(r2))
        np.fill_diagonal(g, 0.0)
        w = g * masses[None, :]
        acc = G * np.einsum("ab,iab->ia", w, diff)
        return np.concatenate([v, acc.ravel()])

    return rhs


def _pair_index(n):
    return np.triu_indices(n, k=1)


def _min_pair_distance(q, ia, ib):
    dq = q[:, ia] - q[:, ib]
    return float(np.sqrt(np.sum(dq * dq, axis=0)).min())


def _rk4_steps(rhs, t0, y0, t_end, h, guard):
    """Fixed-step RK4; returns node times/states and a truncation flag."""
    ts = [t0]
    ys = [y0]
    t, y = t0, y0
    n_steps = int(np.ceil((t_end - t0) / h - 1e-12))
    for _ in range(n_steps):
        hh = min(h, t_end - t)
        k1 = rhs(t, y)
        k2 = rhs(t + hh / 2, y + hh / 2 * k1)
        k3 = rhs(t + hh / 2, y + hh / 2 * k2)
        k4 = rhs(t + hh, y + hh * k3)
        y = y + hh / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t + hh
        ts.append(t)
        ys.append(y)
        if guard(y):
            return np.array(ts), np.array(ys), True
    return np.array(ts), np.array(ys), False


class _HermiteDense:
    """Cubic Hermite interpolant through fixed-step nodes.

    Positions interpolate on (q, v); velocities on (v, a).  Error is O(h^4),
    consistent with the RK4 nodes it connects.
    """

    def __init__(self, ts, ys, rhs):
        self.ts = ts
        self.ys = ys
        self.dys = np.array([rhs(t, y) for t, y in zip(ts, ys)])

    def __call__(self, t):
        i = int(np.clip(np.searchsorted(self.ts, t, side="right") - 1, 0, len(self.ts) - 2))
        h = self.ts[i + 1] - self.ts[i]
        s = (t - self.ts[i]) / h
        y0, y1 = self.ys[i], self.ys[i + 1]
        d0, d1 = self.dys[i] * h, self.dys[i + 1] * h
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        return h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1


def integrate(s0: State, m: MassSystem, p: PairPotential, cfg: IntegratorConfig) -> Trajectory:
    """Run the equations of motion from s0 until cfg.t_end or a guard trip.

    The trajectory is truncated (not an error) when some pair distance falls
    below the collision radius; an integrator failure raises
    IntegrationError with the partial trajectory attached.
    """
    q0 = _check_config(s0.q, m)
    v0 = _check_config(s0.v, m, "velocity")
    cfg.validate(s0.t)

    d, n = m.d, m.n_bodies
    ia, ib = _pair_index(n)
    r0_max = _max_pair_distance(q0, ia, ib)
    r_min = cfg.collision_radius if cfg.collision_radius is not None else 1e-6 * r0_max
    if _min_pair_distance(q0, ia, ib) <= r_min:
        raise InputError("initial pair distances must exceed the collision radius")

    rhs = _make_rhs(m, p)
    y0 = np.concatenate([q0.ravel(), v0.ravel()])
    t0 = float(s0.t)

    truncated = False
    reason = None
    if cfg.kind == "adaptive_embedded":
        scale = float(np.max(np.abs(y0)))
        atol = cfg.abs_tol if cfg.abs_tol is not None else cfg.rel_tol * max(scale, 1.0) * 1e-2

        def guard_event(t, y):
            return _min_pair_distance(y[: d * n].reshape(d, n), ia, ib) - r_min

        guard_event.terminal = True
        guard_event.direction = -1

        sol = solve_ivp(
            rhs,
            (t0, cfg.t_end),
            y0,
            method="RK45",
            rtol=cfg.rel_tol,
            atol=atol,
            max_step=cfg.max_step,
            dense_output=True,
            events=guard_event,
        )
        if sol.status == -1:
            partial = None
            if sol.t.size >= 2:
                partial = _build_trajectory(
                    m, p, cfg, t0, float(sol.t[-1]), sol.sol, True, "step failure"
                )
            raise IntegrationError(f"integrator failed: {sol.message}", trajectory=partial)
        t_reach = float(sol.t[-1])
        if sol.status == 1:
            truncated = True
            reason = "collision guard"
        dense = sol.sol
    else:
        def guard(y):
            return _min_pair_distance(y[: d * n].reshape(d, n), ia, ib) <= r_min

        ts, ys, truncated = _rk4_steps(rhs, t0, y0, cfg.t_end, cfg.step, guard)
        reason = "collision guard" if truncated else None
        t_reach = float(ts[-1])
        dense = _HermiteDense(ts, ys, rhs)

    return _build_trajectory(m, p, cfg, t0, t_reach, dense, truncated, reason)


def _max_pair_distance(q, ia, ib):
    dq = q[:, ia] - q[:, ib]
    return float(np.sqrt(np.sum(dq * dq, axis=0)).max())


def _build_trajectory(m, p, cfg, t0, t_reach, dense, truncated, reason) -> Trajectory:
    d, n = m.d, m.n_bodies
    dt = cfg.sample_interval
    n_samples = int(np.floor((t_reach - t0) / dt + 1e-9)) + 1
    times = t0 + dt * np.arange(n_samples)
    if t_reach - times[-1] > 1e-12 * dt:
        times = np.append(times, t_reach)

    ys = np.array([dense(t) for t in times])
    qs = ys[:, : d * n].reshape(-1, d, n)
    vs = ys[:, d * n :].reshape(-1, d, n)

    ia, ib = _pair_index(n)
    dq = qs[:, :, ia] - qs[:, :, ib]
    r = np.sqrt(np.einsum("sip,sip->sp", dq, dq))
    mm = m.masses[ia] * m.masses[ib]
    pot = m.G * np.sum(mm * p.f(r, ia, ib), axis=1)
    kin = 0.5 * np.einsum("a,sia->s", m.masses, vs * vs)
    energy = kin + pot

    am = np.einsum("sia,a,sja->sij", qs, m.masses, vs)
    am = am - np.transpose(am, (0, 2, 1))
    am_norm = np.linalg.norm(am, axis=(1, 2)) / np.sqrt(2.0)
    momentum_norm = np.linalg.norm(vs @ m.masses, axis=1)

    reduced = qs @ m.jacobi.T  # (s, d, d)
    det = np.linalg.det(reduced)
    sing = np.linalg.svd(reduced, compute_uv=False)
    S = np.where(det < 0, -sing[:, -1], sing[:, -1])
    S[det == 0] = 0.0
    margin = sing[:, -2] - sing[:, -1] if d >= 2 else np.zeros_like(det)
    config_norm = np.linalg.norm(reduced, axis=(1, 2))

    j_scale = float(np.sum(m.masses * np.linalg.norm(qs[0], axis=0) * np.linalg.norm(vs[0], axis=0)))
    zero_am = am_norm[0] <= ZERO_AM_RTOL * j_scale if j_scale > 0 else True
    e_scale = max(abs(energy[0]), 1e-300)
    report = ConservationReport(
        energy_drift_rel=float(np.max(np.abs(energy - energy[0])) / e_scale),
        am_max=float(am_norm.max()),
        am_drift_rel=None
        if zero_am
        else float(np.max(np.linalg.norm(am - am[0], axis=(1, 2))) / np.linalg.norm(am[0])),
        momentum_max=float(momentum_norm.max()),
        initially_zero_am=bool(zero_am),
    )

    return Trajectory(
        m=m,
        potential=p,
        config=cfg,
        times=times,
        qs=qs,
        vs=vs,
        energy=energy,
        am=am,
        am_norm=am_norm,
        momentum_norm=momentum_norm,
        r_max=r.max(axis=1),
        r_min_pair=r.min(axis=1),
        S=S,
        det=det,
        margin=margin,
        config_norm=config_norm,
        conservation=report,
        truncated=truncated,
        truncation_reason=reason,
        _dense=dense,
    )
