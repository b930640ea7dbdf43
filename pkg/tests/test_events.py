import numpy as np
import pytest

from coplanar import (
    IntegratorConfig,
    MassSystem,
    NotDegenerateError,
    PairPotential,
    classify_shape,
    embed_configuration,
    integrate,
    scan_degenerations,
    symbol_sequence,
)
from coplanar.dynamics import _build_trajectory
from coplanar.events import DegenerationEvent, NONGENERIC
from coplanar.scenarios import make_scenario

from conftest import random_rotation


def synthetic_trajectory(m, q_of_t, t0, t1, dt, qdot_of_t=None):
    """Trajectory whose dense output follows an analytic path exactly."""
    d, n = m.d, m.n_bodies
    h = 1e-6 * max(abs(t1 - t0), 1.0)

    def dense(t):
        q = q_of_t(t)
        v = qdot_of_t(t) if qdot_of_t else (q_of_t(t + h) - q_of_t(t - h)) / (2 * h)
        return np.concatenate([q.ravel(), v.ravel()])

    cfg = IntegratorConfig(t_end=t1, sample_interval=dt)
    cfg.validate(t0)
    return _build_trajectory(m, PairPotential.newtonian(), cfg, t0, t1, dense, False, None)


def test_single_synthetic_crossing():
    m = MassSystem([1.0] * 4)

    def q_of_t(t):
        return embed_configuration(np.diag([2.0, 1.0, t]), m)

    traj = synthetic_trajectory(m, q_of_t, -1.0, 1.0, 0.04)
    events = scan_degenerations(traj)
    assert len(events) == 1
    assert events[0].t_star == pytest.approx(0.0, abs=1e-10)
    assert not events[0].grazing
    assert events[0].symbol == "X2"  # bodies 1,2 on one axis, 3,4 on the other


def test_grazing_detection():
    m = MassSystem([1.0] * 4)
    dip = 1e-10

    def q_of_t(t):
        return embed_configuration(np.diag([2.0, 1.0, t * t + dip]), m)

    traj = synthetic_trajectory(m, q_of_t, -1.0, 1.0, 0.04)
    events = scan_degenerations(traj)
    assert len(events) == 1
    assert events[0].grazing
    assert events[0].t_star == pytest.approx(0.0, abs=1e-4)
    word = symbol_sequence(events)
    assert word.startswith("~")


def test_exactly_planar_run_yields_no_spurious_events():
    # Bodies confined to a plane stay coplanar forever: the determinant is
    # roundoff noise and the scanner must not chase its sign flips.
    m = MassSystem([1.0, 1.0, 1e-12, 1e-12])
    omega = np.sqrt(2.0)
    q = np.zeros((3, 4))
    q[0] = [-0.5, 0.5, 500.0, -500.0]
    v = np.zeros((3, 4))
    v[1, 0], v[1, 1] = -0.5 * omega, 0.5 * omega
    from coplanar import State

    cfg = IntegratorConfig(t_end=4.0, sample_interval=0.02, rel_tol=1e-10)
    traj = integrate(State(0.0, q, v), m, PairPotential.newtonian(), cfg)
    assert np.abs(traj.det).max() <= 1e-10
    assert scan_degenerations(traj) == []


def test_interior_on_locus_run_is_one_event():
    # A path that sits on the locus for a while and leaves with the same
    # orientation is a single grazing event; leaving with the opposite
    # orientation is a single crossing.
    m = MassSystem([1.0] * 4)

    def flat(t):
        return np.clip(abs(t) - 0.2, 0.0, None) * np.sign(t)

    def q_same_sign(t):
        return embed_configuration(np.diag([2.0, 1.0, abs(flat(t))]), m)

    traj = synthetic_trajectory(m, q_same_sign, -1.0, 1.0, 0.04)
    events = scan_degenerations(traj)
    assert len(events) == 1
    assert events[0].grazing

    def q_crossing(t):
        return embed_configuration(np.diag([2.0, 1.0, flat(t)]), m)

    traj = synthetic_trajectory(m, q_crossing, -1.0, 1.0, 0.04)
    events = scan_degenerations(traj)
    assert len(events) == 1
    assert not events[0].grazing
    assert -0.2 <= events[0].t_star <= 0.2


def test_no_events_on_nonvanishing_determinant():
    m = MassSystem([1.0] * 4)

    def q_of_t(t):
        return embed_configuration(np.diag([2.0, 1.0, 1.0 + 0.5 * np.sin(t)]), m)

    traj = synthetic_trajectory(m, q_of_t, 0.0, 6.0, 0.05)
    assert scan_degenerations(traj) == []


def test_figure_eight_first_period_word():
    sc = make_scenario("figure_eight")
    cfg = IntegratorConfig(t_end=0.99 * sc.period, sample_interval=sc.period / 1000, rel_tol=1e-10)
    traj = integrate(sc.state, sc.m, sc.potential, cfg)
    events = scan_degenerations(traj)
    word = symbol_sequence(events)
    assert len(events) == 5
    assert set(word) == {"1", "2", "3"}
    # refined roots sit on the locus within 1e-9 of the configuration scale
    scale = traj.config_norm.max()
    from coplanar import reduce_configuration, signed_distance

    for e in events:
        s = signed_distance(reduce_configuration(traj.dense_eval(e.t_star).q, sc.m))
        assert abs(s) <= 1e-9 * scale
        assert e.bracket[0] <= e.t_star <= e.bracket[1]


def test_event_count_stable_under_halved_sampling():
    sc = make_scenario("figure_eight")
    words = []
    for divisor in (500, 1000):
        cfg = IntegratorConfig(t_end=0.99 * sc.period, sample_interval=sc.period / divisor, rel_tol=1e-10)
        traj = integrate(sc.state, sc.m, sc.potential, cfg)
        words.append(symbol_sequence(scan_degenerations(traj)))
    assert words[0] == words[1]


def test_classify_square_and_interior():
    # unit square with labels in cyclic order, lifted to z = 0
    q = np.array(
        [[0.0, 1.0, 1.0, 0.0], [0.0, 0.0, 1.0, 1.0], [0.0, 0.0, 0.0, 0.0]]
    )
    assert classify_shape(q) == "X3"
    # body 4 at the centroid of triangle 123
    tri = np.array([[0.0, 1.0, 0.5], [0.0, 0.0, 0.9], [0.0, 0.0, 0.0]])
    q2 = np.column_stack([tri, tri.mean(axis=1)])
    assert classify_shape(q2) == "I4"


def test_classify_middle_mass():
    q = np.array([[0.0, -1.0, 1.0], [0.0, 0.0, 0.0]])  # labels 1,2,3 at x=0,-1,1
    assert classify_shape(q) == "1"
    q_rolled = q[:, [1, 0, 2]]  # now body 2 sits in the middle
    assert classify_shape(q_rolled) == "2"


def test_classify_rejects_nondegenerate():
    q = np.array(
        [[1.0, 1.0, -1.0, -1.0], [1.0, -1.0, 1.0, -1.0], [1.0, -1.0, -1.0, 1.0]]
    )
    with pytest.raises(NotDegenerateError):
        classify_shape(q)


def test_classify_nongeneric_cases():
    # three of the four bodies collinear
    q = np.array([[0.0, 1.0, 2.0, 0.3], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.0, 0.0]])
    assert classify_shape(q) == NONGENERIC
    # coincident bodies on a line (binary collision)
    q2 = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    assert classify_shape(q2) == NONGENERIC


def test_classify_invariant_under_rigid_motion_and_scale(rng):
    q = np.array(
        [[0.0, 1.3, 1.1, -0.2], [0.0, 0.1, 1.2, 0.9], [0.0, 0.0, 0.0, 0.0]]
    )
    base = classify_shape(q)
    assert base != NONGENERIC
    for _ in range(20):
        g = random_rotation(rng, 3)
        b = rng.standard_normal(3)
        lam = rng.uniform(0.2, 5.0)
        assert classify_shape(lam * (g @ q) + b[:, None]) == base


def test_figure_eight_word_has_cyclic_symmetry():
    # Relabeling the bodies by a 3-cycle is the choreography's symmetry and
    # corresponds to a time shift of a third of a period, so the relabeled
    # word must be a nontrivial cyclic shift of the original.
    sc = make_scenario("figure_eight")
    cfg = IntegratorConfig(t_end=3 * sc.period, sample_interval=sc.period / 1000, rel_tol=1e-10)
    traj = integrate(sc.state, sc.m, sc.potential, cfg)
    word = symbol_sequence(scan_degenerations(traj))
    assert len(word) >= 12
    per_period = 6  # syzygies per period, spacing T/6

    def rotate(w, k):
        return w[k:] + w[:k]

    for cycle in ({"1": "2", "2": "3", "3": "1"}, {"1": "3", "3": "2", "2": "1"}):
        relabeled = "".join(cycle[ch] for ch in word)
        shifts = [k for k in (2, 4) if rotate(word, k)[: len(word) - 4] == relabeled[: len(word) - 4]]
        assert shifts, f"relabeled word is not a T/3-type shift of the original: {word}"


def test_symbol_sequence_basics():
    assert symbol_sequence([]) == ""
    events = [
        DegenerationEvent(t_star=0.0, symbol="X2", residual=0.0, bracket=(0, 0)),
        DegenerationEvent(t_star=1.0, symbol=NONGENERIC, residual=0.0, bracket=(0, 2)),
        DegenerationEvent(t_star=2.0, symbol="I4", residual=0.0, bracket=(1, 3), grazing=True),
    ]
    assert symbol_sequence(events) == "X2?~I4"
