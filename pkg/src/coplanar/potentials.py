"""Attractive pair potentials and the force field they generate.

Interactions have the form V(q) = G sum_{a<b} m_a m_b f_ab(r_ab) where each
f_ab is attractive: f' > 0 and f'' < 0 for r > 0, with f'(r)/r decreasing to
zero.  Those shape conditions make f'(r)/r admit a positive lower bound delta
on any ball r <= c, which sets the guaranteed oscillation frequency
omega = sqrt(G M delta) used by the window checks.
"""

from __future__ import annotations

import numpy as np

from .errors import CollisionError, InputError, PotentialHypothesisError
from .reduction import MassSystem, _check_config

__all__ = [
    "PairPotential",
    "potential_value",
    "acceleration",
    "delta_bound",
    "oscillator_frequency",
    "degeneration_window",
]


class PairPotential:
    """One of the built-in attractive families, or a custom f(r).

    Use the constructors :meth:`newtonian`, :meth:`power_law` or
    :meth:`custom`.  `k` may be a positive scalar or, for `power_law`, a
    symmetric positive matrix of per-pair coefficients indexed by body.
    Custom evaluators must accept numpy arrays.
    """

    def __init__(self, kind, alpha=None, k=1.0, f=None, fprime=None, fsecond=None):
        self.kind = kind
        self.alpha = alpha
        self.k = np.asarray(k, dtype=float) if np.ndim(k) else float(k)
        self._f, self._fprime, self._fsecond = f, fprime, fsecond

    @classmethod
    def newtonian(cls):
        """f(r) = -1/r."""
        return cls("newtonian")

    @classmethod
    def power_law(cls, alpha, k=1.0):
        """f(r) = -k / r**alpha with alpha > 0 and k > 0 (scalar or per-pair)."""
        if alpha <= 0:
            raise InputError("power-law exponent must be positive")
        k_arr = np.asarray(k, dtype=float)
        if np.any(k_arr <= 0) or not np.all(np.isfinite(k_arr)):
            raise InputError("power-law coefficients must be positive")
        if k_arr.ndim == 2:
            if k_arr.shape[0] != k_arr.shape[1] or not np.allclose(k_arr, k_arr.T):
                raise InputError("per-pair coefficients must form a symmetric matrix")
        elif k_arr.ndim != 0:
            raise InputError("k must be a scalar or a square matrix")
        return cls("power_law", alpha=float(alpha), k=k)

    @classmethod
    def custom(cls, f, fprime, fsecond=None):
        """User-supplied evaluators; checked against the shape hypotheses on use."""
        return cls("custom", f=f, fprime=fprime, fsecond=fsecond)

    def _pair_coeff(self, a=None, b=None):
        if np.ndim(self.k) == 2:
            if a is None:
                return self.k
            return self.k[a, b]
        return self.k

    def f(self, r, a=None, b=None):
        if self.kind == "newtonian":
            return -1.0 / r
        if self.kind == "power_law":
            return -self._pair_coeff(a, b) / r**self.alpha
        return self._f(r)

    def fprime(self, r, a=None, b=None):
        if self.kind == "newtonian":
            return 1.0 / r**2
        if self.kind == "power_law":
            return self.alpha * self._pair_coeff(a, b) / r ** (self.alpha + 1.0)
        return self._fprime(r)

    def fsecond(self, r, a=None, b=None):
        if self.kind == "newtonian":
            return -2.0 / r**3
        if self.kind == "power_law":
            alpha = self.alpha
            return -alpha * (alpha + 1.0) * self._pair_coeff(a, b) / r ** (alpha + 2.0)
        if self._fsecond is None:
            raise InputError("custom potential was built without a second derivative")
        return self._fsecond(r)

    def fprime_over_r(self, r, a=None, b=None):
        """f'(r)/r in closed form for the built-in families."""
        if self.kind == "newtonian":
            return 1.0 / r**3
        if self.kind == "power_law":
            return self.alpha * self._pair_coeff(a, b) / r ** (self.alpha + 2.0)
        return self._fprime(r) / r

    def min_pair_coeff(self):
        k = np.asarray(self.k)
        if k.ndim == 2:
            off = k[~np.eye(k.shape[0], dtype=bool)]
            return float(off.min())
        return float(k)

    def check_hypotheses(self, c, n_grid=10_000):
        """Spot-check f' > 0, f'' < 0 and f'(r)/r decreasing on a log grid.

        The grid spans [1e-6 c, 10 c].  Built-in families satisfy the
        hypotheses identically and are not resampled.
        """
        if c <= 0:
            raise InputError("the distance bound c must be positive")
        if self.kind in ("newtonian", "power_law"):
            return
        r = np.logspace(np.log10(1e-6 * c), np.log10(10.0 * c), n_grid)
        fp = np.asarray(self._fprime(r), dtype=float)
        if not np.all(fp > 0):
            raise PotentialHypothesisError("f'(r) must be positive for r > 0")
        if self._fsecond is not None:
            fs = np.asarray(self._fsecond(r), dtype=float)
            if not np.all(fs < 0):
                raise PotentialHypothesisError("f''(r) must be negative for r > 0")
        ratio = fp / r
        if not np.all(np.diff(ratio) < 0):
            raise PotentialHypothesisError("f'(r)/r must be strictly decreasing")


def _pair_distances(q, m):
    """Upper-triangle index arrays and distances; collision check included."""
    ia, ib = np.triu_indices(m.n_bodies, k=1)
    dq = q[:, ia] - q[:, ib]
    r = np.sqrt(np.sum(dq * dq, axis=0))
    if np.any(r == 0.0):
        hit = int(np.argmin(r))
        raise CollisionError(f"bodies {ia[hit] + 1} and {ib[hit] + 1} coincide")
    return ia, ib, r


def potential_value(q, m: MassSystem, p: PairPotential) -> float:
    """V = G sum over pairs a < b of m_a m_b f_ab(r_ab)."""
    q = _check_config(q, m)
    ia, ib, r = _pair_distances(q, m)
    mm = m.masses[ia] * m.masses[ib]
    return m.G * float(np.sum(mm * p.f(r, ia, ib)))


def acceleration(q, m: MassSystem, p: PairPotential) -> np.ndarray:
    """Kinetic-metric gradient of -V: each body is pulled toward the others.

    Body a gets G sum_{b != a} m_b f'(r_ab) (q_b - q_a) / r_ab.
    """
    q = _check_config(q, m)
    n = m.n_bodies
    ia, ib, r = _pair_distances(q, m)
    g = p.fprime_over_r(r, ia, ib)  # f'(r)/r per pair
    dq = q[:, ib] - q[:, ia]
    acc = np.zeros_like(q)
    # Each pair pulls its two members toward each other.
    pull = g * dq  # direction a -> b, scaled
    np.add.at(acc, (slice(None), ia), m.masses[ib] * pull)
    np.add.at(acc, (slice(None), ib), -m.masses[ia] * pull)
    return m.G * acc


def delta_bound(p: PairPotential, c: float) -> float:
    """Lower bound of f'(r)/r over all pairs and all 0 < r <= c.

    Monotone decay of f'(r)/r pins the minimum at r = c, so the bound is the
    smallest f'(c)/c over the pairs: 1/c**3 for the Newtonian family and
    alpha k / c**(alpha+2) for power laws.
    """
    if c <= 0:
        raise InputError("the distance bound c must be positive")
    if p.kind == "newtonian":
        return 1.0 / c**3
    if p.kind == "power_law":
        return p.alpha * p.min_pair_coeff() / c ** (p.alpha + 2.0)
    p.check_hypotheses(c)
    return float(p._fprime(c)) / c


def oscillator_frequency(m: MassSystem, p: PairPotential, c: float) -> float:
    """omega = sqrt(G M delta(c)); sqrt(G M / c^3) in the Newtonian case."""
    return float(np.sqrt(m.G * m.total_mass * delta_bound(p, c)))


def degeneration_window(m: MassSystem, p: PairPotential, c: float) -> float:
    """Window length pi/omega that must contain a degeneration instant.

    Applies to zero-angular-momentum motions whose pair distances stay
    below c.
    """
    return float(np.pi / oscillator_frequency(m, p, c))
