"""Config-driven pipeline: initial data -> run -> events -> verification -> files.

A run config is a single JSON document (schema version 1).  Initial data
comes either from a named scenario or from explicit positions/velocities;
optional flags recenter the momentum and project the velocities to zero
angular momentum before integrating.  Outputs are a per-sample series CSV, a
JSONL event list, and a report JSON bundling the conservation, oscillation,
and concavity summaries with the symbol word.

Exit statuses: 0 success; 2 config error; 3 unwritable output; 4 integrator
failure; 5 window-bound violation with the oscillation law's hypotheses met (a
violation with an unmet hypothesis, e.g. nonzero angular momentum, is not a
failure).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .dynamics import IntegratorConfig, State, Trajectory, integrate
from .errors import CoplanarError, InputError, IntegrationError
from .events import scan_degenerations, symbol_sequence
from .oscillation import check_concavity_segments, check_window_bound, estimate_g_series
from .potentials import PairPotential
from .reduction import MassSystem, center_of_mass, linear_momentum, zero_am_projection
from .scenarios import make_scenario

__all__ = [
    "STATUS_OK",
    "STATUS_CONFIG_ERROR",
    "STATUS_OUTPUT_ERROR",
    "STATUS_INTEGRATION_ERROR",
    "STATUS_BOUND_VIOLATION",
    "RunConfig",
    "PipelineResult",
    "run_pipeline",
    "reanalyze",
    "write_series_csv",
    "read_series_csv",
]

STATUS_OK = 0
STATUS_CONFIG_ERROR = 2
STATUS_OUTPUT_ERROR = 3
STATUS_INTEGRATION_ERROR = 4
STATUS_BOUND_VIOLATION = 5

SERIES_HEADER = "t,S,det,margin,energy,J_norm,p_norm,r_max,r_min_pair"


def _potential_from_dict(d):
    kind = d.get("kind", "newtonian")
    if kind == "newtonian":
        return PairPotential.newtonian()
    if kind == "power_law":
        return PairPotential.power_law(alpha=d["alpha"], k=d.get("k", 1.0))
    raise InputError(f"unknown potential kind {kind!r} (config potentials are newtonian or power_law)")


@dataclass
class RunConfig:
    """Parsed run configuration; `raw` keeps the original document."""

    raw: dict
    d: int | None
    masses: list | None
    G: float
    potential: dict
    scenario: str | None
    scenario_params: dict
    positions: list | None
    velocities: list | None
    project_zero_am: bool
    zero_linear_momentum: bool
    seed: int
    integrator: dict
    outputs: dict
    emit_plot_data: bool

    @classmethod
    def from_dict(cls, doc):
        if not isinstance(doc, dict):
            raise InputError("config must be a JSON object")
        if doc.get("version") != 1:
            raise InputError("config version must be 1")
        initial = doc.get("initial", {})
        scenario = initial.get("scenario")
        positions = initial.get("positions")
        velocities = initial.get("velocities")
        if scenario is None and (positions is None or velocities is None):
            raise InputError("initial data needs a scenario name or explicit positions and velocities")
        if scenario is not None and positions is not None:
            raise InputError("give either a scenario or explicit positions, not both")
        integ = doc.get("integrator", {})
        if "t_end" not in integ and scenario is None:
            raise InputError("integrator.t_end is required for explicit initial data")
        return cls(
            raw=doc,
            d=doc.get("dimension"),
            masses=doc.get("masses"),
            G=float(doc.get("G", 1.0)),
            potential=doc.get("potential", {"kind": "newtonian"}),
            scenario=scenario,
            scenario_params=dict(initial.get("params", {})),
            positions=positions,
            velocities=velocities,
            project_zero_am=bool(doc.get("project_zero_am", False)),
            zero_linear_momentum=bool(doc.get("zero_linear_momentum", False)),
            seed=int(doc.get("seed", 0)),
            integrator=dict(integ),
            outputs=dict(doc.get("outputs", {})),
            emit_plot_data=bool(doc.get("emit_plot_data", False)),
        )

    @classmethod
    def from_file(cls, path):
        try:
            with open(path) as f:
                doc = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot parse config {path}: {exc}") from exc
        return cls.from_dict(doc)


@dataclass
class PipelineResult:
    status: int
    report: dict
    trajectory: Trajectory | None = None
    events: list = field(default_factory=list)
    paths: dict = field(default_factory=dict)


def _build_initial(cfg: RunConfig):
    """Mass system, potential, initial state, and integrator defaults."""
    if cfg.scenario is not None:
        if "potential" in cfg.raw:
            raise InputError("a scenario defines its own potential; drop the potential field")
        sc = make_scenario(cfg.scenario, seed=cfg.seed, G=cfg.G, **cfg.scenario_params)
        if cfg.masses is not None and list(cfg.masses) != list(sc.m.masses):
            raise InputError("config masses conflict with the scenario's masses")
        if cfg.d is not None and cfg.d != sc.m.d:
            raise InputError("config dimension conflicts with the scenario's dimension")
        suggested = dict(sc.suggested)
        if sc.period is not None:
            suggested.setdefault("t_end", 10 * sc.period)
        return sc.m, sc.potential, sc.state, suggested, sc
    if cfg.d is None or cfg.masses is None:
        raise InputError("explicit initial data needs dimension and masses")
    if len(cfg.masses) != cfg.d + 1:
        raise InputError(f"need {cfg.d + 1} masses for dimension {cfg.d} (got {len(cfg.masses)})")
    m = MassSystem(cfg.masses, G=cfg.G)
    q = np.asarray(cfg.positions, dtype=float)
    v = np.asarray(cfg.velocities, dtype=float)
    if q.shape != (m.d, m.n_bodies) or v.shape != (m.d, m.n_bodies):
        raise InputError(f"positions and velocities must have shape {(m.d, m.n_bodies)}")
    return m, _potential_from_dict(cfg.potential), State(t=0.0, q=q, v=v), {}, None


def _integrator_config(cfg: RunConfig, suggested) -> IntegratorConfig:
    merged = dict(suggested)
    merged.update({k: v for k, v in cfg.integrator.items() if v is not None})
    if "t_end" not in merged:
        raise InputError("integrator.t_end is required")
    if "sample_interval" not in merged:
        merged["sample_interval"] = (merged["t_end"]) / 2000.0
    known = {"kind", "rel_tol", "abs_tol", "max_step", "step", "t_end", "sample_interval", "collision_radius"}
    unknown = set(merged) - known
    if unknown:
        raise InputError(f"unknown integrator options: {sorted(unknown)}")
    return IntegratorConfig(**merged)


def _float_repr(x) -> str:
    return repr(float(x))


def write_series_csv(path, traj: Trajectory):
    """One row per sample; shortest round-trip decimal formatting."""
    cols = [
        traj.times,
        traj.S,
        traj.det,
        traj.margin,
        traj.energy,
        traj.am_norm,
        traj.momentum_norm,
        traj.r_max,
        traj.r_min_pair,
    ]
    with open(path, "w") as f:
        f.write(SERIES_HEADER + "\n")
        for row in zip(*cols):
            f.write(",".join(_float_repr(x) for x in row) + "\n")


def read_series_csv(path):
    """Columns of a series CSV as a dict of arrays."""
    with open(path) as f:
        header = f.readline().strip().split(",")
        data = np.loadtxt(f, delimiter=",", ndmin=2)
    if header != SERIES_HEADER.split(","):
        raise InputError(f"unexpected series header in {path}")
    return {name: data[:, i] for i, name in enumerate(header)}


def _write_events_jsonl(path, events):
    with open(path, "w") as f:
        for e in events:
            f.write(json.dumps(e.as_dict()) + "\n")


def _analysis_report(traj, events, scenario=None, seed=0):
    osc = check_window_bound(traj, events)
    seg = check_concavity_segments(traj, events)
    try:
        g_est = estimate_g_series(traj)
        g_vals = g_est.g[g_est.mask]
        g_summary = {
            "n_unmasked": int(g_est.mask.sum()),
            "min": float(np.min(g_vals)) if g_vals.size else None,
            "lower_bound": g_est.lower_bound,
            "bound_satisfied": bool(g_vals.size == 0 or np.min(g_vals) >= g_est.lower_bound * (1 - 1e-3)),
            "nonzero_am": g_est.nonzero_am,
        }
    except InputError:
        g_summary = {"n_unmasked": 0, "min": None, "lower_bound": None, "bound_satisfied": None, "nonzero_am": None}

    report = {
        "version": 1,
        "seed": seed,
        "n_events": len(events),
        "n_grazing": sum(1 for e in events if e.grazing),
        "word": symbol_sequence(events),
        "conservation": traj.conservation.as_dict(),
        "oscillation": osc.as_dict(),
        "segments": seg.as_dict(),
        "g_estimate": g_summary,
        "truncated": traj.truncated,
        "truncation_reason": traj.truncation_reason,
        "t_span": list(traj.t_span),
    }
    if scenario is not None:
        report["scenario"] = scenario.name
        if scenario.period is not None:
            report["period"] = scenario.period
    return report, osc


def run_pipeline(cfg: RunConfig) -> PipelineResult:
    """Execute a config end to end and write its output files."""
    try:
        m, pot, state, suggested, scenario = _build_initial(cfg)
        icfg = _integrator_config(cfg, suggested)
        q, v = state.q.copy(), state.v.copy()
        if cfg.zero_linear_momentum:
            v = v - (linear_momentum(v, m) / m.total_mass)[:, None]
            q = q - center_of_mass(q, m)[:, None]
        if cfg.project_zero_am:
            v = zero_am_projection(q, v, m)
        state = State(t=state.t, q=q, v=v)
    except (CoplanarError, KeyError, TypeError, ValueError) as exc:
        return PipelineResult(status=STATUS_CONFIG_ERROR, report={"error": str(exc)})

    try:
        traj = integrate(state, m, pot, icfg)
    except IntegrationError as exc:
        return PipelineResult(status=STATUS_INTEGRATION_ERROR, report={"error": str(exc)})
    except CoplanarError as exc:
        return PipelineResult(status=STATUS_CONFIG_ERROR, report={"error": str(exc)})

    events = scan_degenerations(traj)
    report, osc = _analysis_report(traj, events, scenario=scenario, seed=cfg.seed)
    report["config"] = cfg.raw
    status = STATUS_OK
    if osc.violations and osc.hypotheses_met:
        status = STATUS_BOUND_VIOLATION
    report["status"] = status

    paths = {}
    try:
        out = cfg.outputs
        if out.get("series_csv"):
            write_series_csv(out["series_csv"], traj)
            paths["series_csv"] = out["series_csv"]
        if out.get("events_jsonl"):
            _write_events_jsonl(out["events_jsonl"], events)
            paths["events_jsonl"] = out["events_jsonl"]
        if cfg.emit_plot_data and out.get("plot_data"):
            with open(out["plot_data"], "w") as f:
                json.dump(
                    {
                        "t": traj.times.tolist(),
                        "S": traj.S.tolist(),
                        "r_max": traj.r_max.tolist(),
                        "energy": traj.energy.tolist(),
                    },
                    f,
                )
            paths["plot_data"] = out["plot_data"]
        if out.get("report_json"):
            with open(out["report_json"], "w") as f:
                json.dump(report, f, indent=2)
            paths["report_json"] = out["report_json"]
    except OSError as exc:
        return PipelineResult(status=STATUS_OUTPUT_ERROR, report={"error": str(exc), **report})

    return PipelineResult(status=status, report=report, trajectory=traj, events=events, paths=paths)


class _SeriesShim:
    """Duck-typed stand-in for Trajectory built from a series CSV.

    Lets the oscillation checks rerun on stored data.  The configuration
    scale is proxied by the pair-distance maximum (the reduced norm is not
    stored in the CSV), which only affects the default masking thresholds.
    """

    def __init__(self, series, m, potential, sample_interval):
        from .dynamics import ConservationReport, IntegratorConfig as _IC

        self.m = m
        self.potential = potential
        self.times = series["t"]
        self.S = series["S"]
        self.det = series["det"]
        self.margin = series["margin"]
        self.energy = series["energy"]
        self.am_norm = series["J_norm"]
        self.momentum_norm = series["p_norm"]
        self.r_max = series["r_max"]
        self.r_min_pair = series["r_min_pair"]
        self.config_norm = series["r_max"]
        self.truncated = False
        self.truncation_reason = None
        self.config = _IC(t_end=float(self.times[-1]), sample_interval=sample_interval)
        e_scale = max(abs(self.energy[0]), 1e-300)
        zero_am = self.am_norm[0] <= 1e-9 * max(1.0, float(self.am_norm.max()))
        self.conservation = ConservationReport(
            energy_drift_rel=float(np.max(np.abs(self.energy - self.energy[0])) / e_scale),
            am_max=float(self.am_norm.max()),
            am_drift_rel=None if zero_am else float(np.max(np.abs(self.am_norm - self.am_norm[0])) / self.am_norm[0]),
            momentum_max=float(self.momentum_norm.max()),
            initially_zero_am=bool(zero_am),
        )

    @property
    def t_span(self):
        return float(self.times[0]), float(self.times[-1])


def reanalyze(cfg: RunConfig) -> PipelineResult:
    """Rebuild the report from an existing series CSV (and events JSONL).

    Events are taken from the stored JSONL when present; otherwise they are
    re-derived from determinant sign changes at sample resolution.
    """
    try:
        m, pot, _, suggested, scenario = _build_initial(cfg)
        series_path = cfg.outputs.get("series_csv")
        if not series_path or not os.path.exists(series_path):
            raise InputError("verify needs an existing outputs.series_csv")
        series = read_series_csv(series_path)
        dt = float(np.median(np.diff(series["t"]))) if series["t"].size > 1 else 1.0
        shim = _SeriesShim(series, m, pot, dt)
    except (CoplanarError, KeyError, TypeError, ValueError) as exc:
        return PipelineResult(status=STATUS_CONFIG_ERROR, report={"error": str(exc)})

    events_path = cfg.outputs.get("events_jsonl")
    events = []
    if events_path and os.path.exists(events_path):
        from .events import DegenerationEvent

        with open(events_path) as f:
            for line in f:
                rec = json.loads(line)
                events.append(
                    DegenerationEvent(
                        t_star=rec["t_star"],
                        symbol=rec["symbol"],
                        residual=rec["residual"],
                        bracket=tuple(rec["bracket"]),
                        grazing=rec.get("grazing", False),
                    )
                )
    else:
        t, det = series["t"], series["det"]
        sg = np.sign(det)
        from .events import DegenerationEvent, NONGENERIC

        for i in np.nonzero(sg[:-1] * sg[1:] < 0)[0]:
            frac = det[i] / (det[i] - det[i + 1])
            t_star = float(t[i] + frac * (t[i + 1] - t[i]))
            events.append(
                DegenerationEvent(
                    t_star=t_star,
                    symbol=NONGENERIC,
                    residual=float(min(abs(det[i]), abs(det[i + 1]))),
                    bracket=(float(t[i]), float(t[i + 1])),
                )
            )

    report, osc = _analysis_report(shim, events, scenario=scenario, seed=cfg.seed)
    report["config"] = cfg.raw
    report["reanalysis"] = True
    status = STATUS_BOUND_VIOLATION if (osc.violations and osc.hypotheses_met) else STATUS_OK
    report["status"] = status

    paths = {}
    if cfg.outputs.get("report_json"):
        try:
            with open(cfg.outputs["report_json"], "w") as f:
                json.dump(report, f, indent=2)
            paths["report_json"] = cfg.outputs["report_json"]
        except OSError as exc:
            return PipelineResult(status=STATUS_OUTPUT_ERROR, report={"error": str(exc), **report})
    return PipelineResult(status=status, report=report, events=events, paths=paths)
