import numpy as np
import pytest

from coplanar import (
    InputError,
    IntegrationError,
    IntegratorConfig,
    MassSystem,
    PairPotential,
    State,
    dense_eval,
    integrate,
)
from coplanar.scenarios import make_scenario


def kepler_pair():
    """Circular two-body orbit with two far spectators of negligible mass.

    The pair has unit separation and unit masses, so the period is
    2 pi sqrt(r^3 / (G (m1 + m2))) = 2 pi / sqrt(2).
    """
    m = MassSystem([1.0, 1.0, 1e-12, 1e-12], G=1.0)
    omega = np.sqrt(2.0)
    q = np.zeros((3, 4))
    q[0, 0], q[0, 1] = -0.5, 0.5
    q[2, 2], q[2, 3] = 500.0, -500.0
    v = np.zeros((3, 4))
    v[1, 0], v[1, 1] = -0.5 * omega, 0.5 * omega
    return m, State(t=0.0, q=q, v=v), 2 * np.pi / omega


def test_kepler_period():
    m, s0, period = kepler_pair()
    cfg = IntegratorConfig(t_end=1.05 * period, sample_interval=period / 200, rel_tol=1e-11)
    traj = integrate(s0, m, PairPotential.newtonian(), cfg)
    end = traj.dense_eval(period)
    rel = np.linalg.norm(end.q[:, :2] - s0.q[:, :2])
    assert rel <= 1e-6


def test_figure_eight_closes_after_one_period():
    sc = make_scenario("figure_eight")
    cfg = IntegratorConfig(t_end=1.01 * sc.period, sample_interval=sc.period / 500, rel_tol=1e-10)
    traj = integrate(sc.state, sc.m, sc.potential, cfg)
    end = traj.dense_eval(sc.period)
    err = max(np.abs(end.q - sc.state.q).max(), np.abs(end.v - sc.state.v).max())
    assert err <= 1e-6


def test_conservation_on_figure_eight():
    sc = make_scenario("figure_eight")
    cfg = IntegratorConfig(t_end=2 * sc.period, sample_interval=sc.period / 500, rel_tol=1e-10)
    traj = integrate(sc.state, sc.m, sc.potential, cfg)
    rep = traj.conservation
    assert rep.initially_zero_am
    assert rep.energy_drift_rel <= 1e-8
    assert rep.am_max <= 1e-10
    assert rep.momentum_max <= 1e-12


def test_collision_guard_trips_on_collinear_collapse():
    # Zero-velocity equal masses on a line fall into a simultaneous
    # collision; the guard must truncate the run, not crash it.
    m = MassSystem([1.0, 1.0, 1.0])
    q = np.array([[-1.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    s0 = State(t=0.0, q=q, v=np.zeros((2, 3)))
    cfg = IntegratorConfig(t_end=5.0, sample_interval=0.01, rel_tol=1e-9, collision_radius=1e-3)
    traj = integrate(s0, m, PairPotential.newtonian(), cfg)
    assert traj.truncated
    assert traj.truncation_reason == "collision guard"
    assert traj.t_span[1] < 1.1  # collapse happens just before t = 1
    assert traj.r_min_pair[-1] <= 2e-3


def test_step_underflow_raises_with_partial_trajectory():
    m = MassSystem([1.0, 1.0, 1.0])
    q = np.array([[-1.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    s0 = State(t=0.0, q=q, v=np.zeros((2, 3)))
    cfg = IntegratorConfig(t_end=5.0, sample_interval=0.01, rel_tol=1e-10, collision_radius=0.0)
    with pytest.raises(IntegrationError) as exc_info:
        integrate(s0, m, PairPotential.newtonian(), cfg)
    partial = exc_info.value.trajectory
    assert partial is not None
    assert partial.truncated
    assert 0.9 < partial.t_span[1] < 1.1


def test_dense_eval_nodes_and_range():
    m, s0, period = kepler_pair()
    cfg = IntegratorConfig(t_end=period, sample_interval=period / 50, rel_tol=1e-10)
    traj = integrate(s0, m, PairPotential.newtonian(), cfg)
    i = 17
    node = dense_eval(traj, traj.times[i])
    np.testing.assert_array_equal(node.q, traj.qs[i])
    np.testing.assert_array_equal(node.v, traj.vs[i])
    with pytest.raises(InputError):
        dense_eval(traj, traj.times[-1] + 1.0)
    with pytest.raises(InputError):
        dense_eval(traj, traj.times[0] - 1.0)


def test_dense_eval_midpoint_against_reintegration():
    m, s0, period = kepler_pair()
    rel_tol = 1e-9
    cfg = IntegratorConfig(t_end=period, sample_interval=period / 40, rel_tol=rel_tol)
    traj = integrate(s0, m, PairPotential.newtonian(), cfg)
    i = 11
    t_mid = 0.5 * (traj.times[i] + traj.times[i + 1])
    probe = traj.dense_eval(t_mid)
    # re-integrate from the node at much tighter tolerance as the reference
    ref_cfg = IntegratorConfig(
        t_end=t_mid, sample_interval=t_mid - traj.times[i], rel_tol=1e-13, abs_tol=1e-13
    )
    ref = integrate(traj.state(i), m, PairPotential.newtonian(), ref_cfg)
    ref_state = ref.dense_eval(t_mid)
    err = np.linalg.norm(probe.q - ref_state.q)
    assert err <= 10 * rel_tol * max(1.0, np.linalg.norm(probe.q))


def test_time_reversal():
    sc = make_scenario("figure_eight")
    t1 = sc.period / 2
    cfg = IntegratorConfig(t_end=t1, sample_interval=t1 / 100, rel_tol=1e-11)
    fwd = integrate(sc.state, sc.m, sc.potential, cfg)
    mid = fwd.dense_eval(t1)
    back = integrate(State(0.0, mid.q, -mid.v), sc.m, sc.potential, cfg)
    end = back.dense_eval(t1)
    assert np.abs(end.q - sc.state.q).max() <= 100 * 1e-11 * 10
    assert np.abs(end.v + sc.state.v).max() <= 100 * 1e-11 * 10


def test_momentum_conservation_with_drift():
    m, s0, period = kepler_pair()
    v = s0.v.copy()
    v[0] += 0.3  # boost the whole system
    cfg = IntegratorConfig(t_end=period, sample_interval=period / 100, rel_tol=1e-10)
    traj = integrate(State(0.0, s0.q, v), m, PairPotential.newtonian(), cfg)
    p0 = traj.vs[0] @ m.masses
    drift = max(np.linalg.norm(traj.vs[i] @ m.masses - p0) for i in range(traj.times.size))
    assert drift <= 1e-12


def test_rk4_cross_check():
    sc = make_scenario("figure_eight")
    span = sc.period / 4
    cfg_a = IntegratorConfig(t_end=span, sample_interval=span / 50, rel_tol=1e-11)
    cfg_r = IntegratorConfig(
        t_end=span, sample_interval=span / 50, kind="rk4_fixed", step=span / 20000
    )
    ta = integrate(sc.state, sc.m, sc.potential, cfg_a)
    tr = integrate(sc.state, sc.m, sc.potential, cfg_r)
    assert np.abs(ta.qs[-1] - tr.qs[-1]).max() <= 1e-8
    mid = 0.37 * span
    assert np.abs(ta.dense_eval(mid).q - tr.dense_eval(mid).q).max() <= 1e-7


def test_zero_am_stays_zero():
    sc = make_scenario("perturbed_tetrahedron", seed=3)
    cfg = IntegratorConfig(t_end=1.0, sample_interval=0.002, rel_tol=1e-11)
    traj = integrate(sc.state, sc.m, sc.potential, cfg)
    assert traj.conservation.initially_zero_am
    assert traj.conservation.am_max <= 1e-10


def test_four_dimensional_run():
    # The machinery is dimension-generic: five bodies in d = 4 integrate,
    # conserve, and scan (no symbol alphabet there, so words show "?").
    rng = np.random.default_rng(11)
    m = MassSystem([1.0] * 5)
    q = rng.standard_normal((4, 5))
    q -= q.mean(axis=1, keepdims=True)
    v = 0.4 * rng.standard_normal((4, 5))
    v -= v.mean(axis=1, keepdims=True)
    from coplanar import zero_am_projection

    v = zero_am_projection(q, v, m)
    cfg = IntegratorConfig(t_end=3.0, sample_interval=0.005, rel_tol=1e-10)
    traj = integrate(State(0.0, q, v), m, PairPotential.newtonian(), cfg)
    assert traj.conservation.initially_zero_am
    assert traj.conservation.energy_drift_rel <= 1e-6
    from coplanar import scan_degenerations, symbol_sequence

    events = scan_degenerations(traj)
    assert len(events) >= 1  # zero AM keeps forcing degenerations in d = 4
    assert set(symbol_sequence(events)) <= {"?", "~"}


def test_per_pair_coefficients_integrate():
    m = MassSystem([1.0, 1.0, 1.0])
    k = np.array([[1.0, 2.0, 0.5], [2.0, 1.0, 1.0], [0.5, 1.0, 1.0]])
    p = PairPotential.power_law(alpha=1.0, k=k)
    q = np.array([[-1.0, 1.0, 0.2], [0.0, 0.3, 1.0]])
    v = np.zeros((2, 3))
    cfg = IntegratorConfig(t_end=0.5, sample_interval=0.005, rel_tol=1e-11)
    traj = integrate(State(0.0, q, v), m, p, cfg)
    assert traj.conservation.energy_drift_rel <= 1e-9


def test_config_validation():
    m, s0, _ = kepler_pair()
    with pytest.raises(InputError):
        integrate(s0, m, PairPotential.newtonian(), IntegratorConfig(t_end=-1.0, sample_interval=0.1))
    with pytest.raises(InputError):
        integrate(s0, m, PairPotential.newtonian(), IntegratorConfig(t_end=1.0, sample_interval=0.0))
    with pytest.raises(InputError):
        integrate(
            s0, m, PairPotential.newtonian(), IntegratorConfig(t_end=1.0, sample_interval=0.1, kind="rk4_fixed")
        )
