"""Locating degeneration instants and naming the degenerate shapes.

A degeneration instant is a zero of the reduced-matrix determinant along a
trajectory.  Sign changes between samples are bracketed and polished on the
dense output; near-tangencies (the signed distance dips to zero without a
sign change) are reported as grazing events.

Degenerate shapes get symbols.  Three bodies on a line are typed by the
middle mass: "1", "2" or "3".  Four bodies in a plane are typed by their
convex hull: a convex quadrilateral is "Xk" where body k sits opposite body
1 in the cyclic hull order, and a triangle with one body inside is "Ij"
where j is the interior body.  Configurations with three collinear bodies
(binary collisions included) are non-generic and render as "?" in words.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import InputError, NotDegenerateError
from .linalg import ON_SIGMA_RTOL
from .reduction import reduce_configuration
from .dynamics import Trajectory

__all__ = [
    "NONGENERIC",
    "DegenerationEvent",
    "classify_shape",
    "scan_degenerations",
    "symbol_sequence",
]

NONGENERIC = "NONGENERIC"

# |S| below this times the configuration scale counts as on the degeneration
# locus; used for grazing detection.
ON_LOCUS_RTOL = 1e-9


@dataclass(frozen=True)
class DegenerationEvent:
    """One refined root of det(reduced(q(t))) = 0.

    `grazing` marks events found as near-tangencies rather than sign
    changes; `residual` is |det| at the refined time.
    """

    t_star: float
    symbol: str
    residual: float
    bracket: tuple
    grazing: bool = False

    def as_dict(self):
        return {
            "t_star": self.t_star,
            "symbol": self.symbol,
            "residual": self.residual,
            "bracket": list(self.bracket),
            "grazing": self.grazing,
        }


def _middle_of_line(coords, tol, scale):
    """Symbol for 3 collinear scalars; NONGENERIC on coincident bodies."""
    order = np.argsort(coords)
    gaps = np.diff(coords[order])
    if np.any(gaps <= tol * scale):
        return NONGENERIC
    return str(order[1] + 1)


def _cross2(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _coplanar_symbol(pts, tol_area, scale):
    """Symbol for 4 labelled points in the plane (columns of pts)."""
    # Any collinear triple (collisions included) is non-generic.
    for i in range(4):
        for j in range(i + 1, 4):
            for k in range(j + 1, 4):
                area2 = _cross2(pts[:, j] - pts[:, i], pts[:, k] - pts[:, i])
                if abs(area2) <= tol_area * scale * scale:
                    return NONGENERIC

    inside = []
    for j in range(4):
        others = [i for i in range(4) if i != j]
        a, b, c = (pts[:, i] for i in others)
        p = pts[:, j]
        s1 = _cross2(b - a, p - a)
        s2 = _cross2(c - b, p - b)
        s3 = _cross2(a - c, p - c)
        if (s1 > 0 and s2 > 0 and s3 > 0) or (s1 < 0 and s2 < 0 and s3 < 0):
            inside.append(j)

    if len(inside) == 1:
        return f"I{inside[0] + 1}"
    if inside:
        return NONGENERIC

    # Convex position: read the cyclic order off the angles about the centroid
    # and name the body opposite body 1.
    centred = pts - pts.mean(axis=1, keepdims=True)
    angles = np.arctan2(centred[1], centred[0])
    cyclic = list(np.argsort(angles))
    pos1 = cyclic.index(0)
    opposite = cyclic[(pos1 + 2) % 4]
    return f"X{opposite + 1}"


def classify_shape(q, d=None, tol_rank=1e-8, tol_area=1e-8) -> str:
    """Symbol of a degenerate configuration (see the module docstring).

    `q` holds positions as columns.  The configuration must already be
    degenerate: its points must fit an affine subspace of dimension d-1
    within `tol_rank` (relative), else NotDegenerateError is raised.
    """
    q = np.asarray(q, dtype=float)
    if d is None:
        d = q.shape[0]
    if q.shape != (d, d + 1):
        raise InputError(f"expected positions of shape {(d, d + 1)}, got {q.shape}")
    if d not in (2, 3):
        raise InputError("shape symbols are defined for d = 2 and d = 3 only")

    centred = q - q.mean(axis=1, keepdims=True)
    u, s, _ = np.linalg.svd(centred)
    if s[0] == 0.0:
        return NONGENERIC  # total collision
    if s[-1] > tol_rank * s[0]:
        raise NotDegenerateError(
            f"configuration is not degenerate within tolerance "
            f"(smallest/largest singular value = {s[-1] / s[0]:.3e})"
        )
    coords = u[:, : d - 1].T @ centred
    scale = float(s[0])

    if d == 2:
        return _middle_of_line(coords[0], tol_rank, scale)
    return _coplanar_symbol(coords, tol_area, scale)


def _det_along(traj: Trajectory):
    m = traj.m

    def f(t):
        return float(np.linalg.det(reduce_configuration(traj.dense_eval(t).q, m)))

    return f


def _zero_runs(sg):
    """Maximal index runs where sg == 0, as (start, end) inclusive pairs."""
    runs = []
    i = 0
    n = sg.size
    while i < n:
        if sg[i] == 0:
            j = i
            while j + 1 < n and sg[j + 1] == 0:
                j += 1
            runs.append((i, j))
            i = j + 1
        else:
            i += 1
    return runs


def scan_degenerations(traj: Trajectory, m=None, time_rtol=1e-12) -> list:
    """All degeneration events of a trajectory, in time order.

    Every determinant sign change between consecutive samples is refined by
    bracketed root finding on the dense output.  Sampled determinants below
    the noise floor count as on the locus: an interior run of such samples
    becomes one event (a crossing if the signs on its two sides differ, a
    grazing event otherwise), while runs touching the trajectory boundary
    are skipped because they cannot be bracketed.  In particular a stretch
    where the motion stays on the locus (an exactly planar sub-problem)
    yields no spurious roots.  Local minima of |S| that reach the on-locus
    tolerance without a sign change are refined as grazing events too.
    """
    if m is not None and m is not traj.m:
        raise InputError("mass system does not match the trajectory")
    m = traj.m
    if traj.times.size < 2:
        raise InputError("need at least two samples to scan")

    det = traj.det
    times = traj.times
    det_f = _det_along(traj)
    scale = float(traj.config_norm.max())
    graze_tol = ON_LOCUS_RTOL * scale
    # determinant values dominated by roundoff; |S| <= rtol * norm translates
    # to |det| <= rtol * norm^d
    det_floor = ON_SIGMA_RTOL * traj.config_norm**m.d

    events = []
    sg = np.sign(det)
    sg[np.abs(det) <= det_floor] = 0

    def refine_crossing(t_lo, t_hi):
        t_star = brentq(det_f, t_lo, t_hi, xtol=time_rtol * max(abs(t_hi), 1.0), rtol=max(time_rtol, 4e-16))
        q = traj.dense_eval(t_star).q
        return DegenerationEvent(
            t_star=float(t_star),
            symbol=_classify_or_nongeneric(q, m.d),
            residual=abs(det_f(t_star)),
            bracket=(float(t_lo), float(t_hi)),
        )

    def refine_touch(t_lo, t_hi, grazing):
        res = minimize_scalar(lambda t: abs(det_f(t)), bounds=(t_lo, t_hi), method="bounded")
        t_star = float(res.x)
        q = traj.dense_eval(t_star).q
        return DegenerationEvent(
            t_star=t_star,
            symbol=_classify_or_nongeneric(q, m.d),
            residual=abs(float(res.fun)),
            bracket=(float(t_lo), float(t_hi)),
            grazing=grazing,
        )

    for i in np.nonzero(sg[:-1] * sg[1:] < 0)[0]:
        events.append(refine_crossing(float(times[i]), float(times[i + 1])))

    for a, b in _zero_runs(sg):
        if a == 0 or b == times.size - 1:
            continue  # touches the boundary: no two-sided bracket exists
        t_lo, t_hi = float(times[a - 1]), float(times[b + 1])
        if sg[a - 1] * sg[b + 1] < 0:
            events.append(refine_crossing(t_lo, t_hi))
        else:
            events.append(refine_touch(t_lo, t_hi, grazing=True))

    abs_s = np.abs(traj.S)
    for i in range(1, times.size - 1):
        if not (abs_s[i] < graze_tol and abs_s[i] <= abs_s[i - 1] and abs_s[i] <= abs_s[i + 1]):
            continue
        if sg[i - 1] * sg[i + 1] < 0 or 0 in (sg[i - 1], sg[i], sg[i + 1]):
            continue  # already captured as a crossing or an on-locus run
        events.append(refine_touch(float(times[i - 1]), float(times[i + 1]), grazing=True))

    events.sort(key=lambda e: e.t_star)
    return events


def _classify_or_nongeneric(q, d):
    try:
        return classify_shape(q, d)
    except (NotDegenerateError, InputError):
        return NONGENERIC


def symbol_sequence(events) -> str:
    """Concatenated symbols in time order.

    Non-generic entries render as "?"; grazing events are prefixed with "~".
    """
    parts = []
    for e in events:
        token = "?" if e.symbol == NONGENERIC else e.symbol
        parts.append(("~" if e.grazing else "") + token)
    return "".join(parts)
