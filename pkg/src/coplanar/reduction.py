"""Translation reduction of N = d+1 bodies to square matrices.

Positions live in a d x N matrix whose columns are the bodies.  The masses
define the kinetic-energy inner product <u, v> = sum_a m_a u_a . v_a on
configurations and <xi, eta> = sum_a xi_a eta_a / m_a on label-space vectors.
A mass-orthonormal, zero-sum, oriented basis of the hyperplane
{xi_1 + ... + xi_N = 0} turns the translation quotient into the d x d
matrices with the plain Frobenius inner product, which is where the signed
distance of :mod:`coplanar.linalg` applies.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError, RankDeficiencyError

__all__ = [
    "MassSystem",
    "jacobi_basis",
    "reduce_configuration",
    "embed_configuration",
    "center_of_mass",
    "linear_momentum",
    "angular_momentum",
    "angular_momentum_vector",
    "angular_momentum_norm",
    "zero_am_projection",
    "kinetic_energy",
    "mass_norm",
]


def _label_gram(masses, basis):
    """Gram matrix of label-space row vectors under <e_a, e_b> = delta/m_a."""
    return (basis / masses) @ basis.T


def jacobi_basis(masses) -> np.ndarray:
    """Mass-orthonormal, zero-sum, oriented basis of the zero-sum hyperplane.

    Returns an (N-1, N) array whose rows E_i satisfy sum(E_i) = 0 and
    <E_i, E_j> = delta_ij under <e_a, e_b> = delta_ab / m_a.

    For N = 4 the rows are the normalized pairwise vectors built from
    (1,-1,0,0), (0,0,1,-1) and the difference of the two pair centers; the
    same pairing recursion is used whenever N is a power of two.  Other N use
    the sequential scheme: body 1 minus body 2, then each new body against
    the running center of mass.  If the resulting basis together with the
    mass vector is negatively oriented, the last row is negated.
    """
    masses = np.asarray(masses, dtype=float)
    if masses.ndim != 1 or masses.size < 2:
        raise InputError("need at least two masses")
    if not np.all(np.isfinite(masses)) or np.any(masses <= 0.0):
        raise InputError("masses must be positive and finite")
    n = masses.size

    raw = []
    if n & (n - 1) == 0:
        # Pairing recursion: difference within each pair, then differences of
        # pair centers, and so on up.  Clusters are index lists.
        clusters = [[a] for a in range(n)]
        while len(clusters) > 1:
            merged = []
            for left, right in zip(clusters[0::2], clusters[1::2]):
                v = np.zeros(n)
                if len(left) == 1 and len(right) == 1:
                    v[left[0]] = 1.0
                    v[right[0]] = -1.0
                else:
                    v[right] = masses[right] / masses[right].sum()
                    v[left] = -masses[left] / masses[left].sum()
                raw.append(v)
                merged.append(left + right)
            clusters = merged
    else:
        v = np.zeros(n)
        v[0], v[1] = 1.0, -1.0
        raw.append(v)
        for k in range(2, n):
            v = np.zeros(n)
            v[k] = 1.0
            v[:k] = -masses[:k] / masses[:k].sum()
            raw.append(v)

    basis = np.array(raw)
    norms = np.sqrt(np.sum(basis * basis / masses, axis=1))
    basis /= norms[:, None]

    # Oriented: (E_1, ..., E_{N-1}, m) must be a positively oriented basis
    # of label space.
    if np.linalg.det(np.vstack([basis, masses]).T) < 0:
        basis[-1] = -basis[-1]
    return basis


class MassSystem:
    """Masses of N = d+1 bodies with their cached oriented Jacobi basis."""

    def __init__(self, masses, G: float = 1.0):
        masses = np.asarray(masses, dtype=float)
        if not np.isfinite(G) or G <= 0:
            raise InputError("G must be positive")
        self.jacobi = jacobi_basis(masses)  # validates the masses
        self.masses = masses
        self.G = float(G)
        self.n_bodies = masses.size
        self.d = masses.size - 1
        self.total_mass = float(masses.sum())
        self.masses.setflags(write=False)
        self.jacobi.setflags(write=False)

    def __repr__(self):
        return f"MassSystem(masses={self.masses.tolist()}, G={self.G})"


def _check_config(q, m: MassSystem, name="configuration") -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.shape != (m.d, m.n_bodies):
        raise InputError(
            f"{name} must have shape {(m.d, m.n_bodies)}, got {q.shape}"
        )
    if not np.all(np.isfinite(q)):
        raise InputError(f"{name} has non-finite entries")
    return q


def reduce_configuration(q, m: MassSystem) -> np.ndarray:
    """d x d matrix of the configuration in the oriented Jacobi basis.

    Column j is q applied to the j-th basis vector; the result is invariant
    under translating all bodies together, and its Frobenius norm equals the
    mass norm of q whenever the center of mass is zero.
    """
    q = _check_config(q, m)
    return q @ m.jacobi.T


def embed_configuration(x, m: MassSystem) -> np.ndarray:
    """Positions of the center-of-mass-zero configuration reducing to x."""
    x = np.asarray(x, dtype=float)
    if x.shape != (m.d, m.d):
        raise InputError(f"reduced matrix must be {m.d} x {m.d}, got {x.shape}")
    return x @ (m.jacobi / m.masses)


def center_of_mass(q, m: MassSystem) -> np.ndarray:
    return np.asarray(q, dtype=float) @ m.masses / m.total_mass


def linear_momentum(v, m: MassSystem) -> np.ndarray:
    return np.asarray(v, dtype=float) @ m.masses


def kinetic_energy(v, m: MassSystem) -> float:
    """K = 1/2 sum_a m_a |v_a|^2."""
    v = _check_config(v, m, "velocity")
    return 0.5 * float(np.sum(m.masses * np.sum(v * v, axis=0)))


def mass_norm(u, m: MassSystem) -> float:
    """Kinetic-metric norm sqrt(sum_a m_a |u_a|^2) of a configuration-shaped array."""
    u = np.asarray(u, dtype=float)
    return float(np.sqrt(np.sum(m.masses * np.sum(u * u, axis=0))))


def angular_momentum(q, v, m: MassSystem) -> np.ndarray:
    """Total angular momentum as the skew matrix sum_a m_a q_a ^ v_a.

    Entry (i, j) is sum_a m_a (q_ai v_aj - q_aj v_ai).
    """
    q = _check_config(q, m)
    v = _check_config(v, m, "velocity")
    a = (q * m.masses) @ v.T
    return a - a.T


def angular_momentum_vector(j) -> np.ndarray:
    """3-vector (J_23, J_31, J_12) of a 3 x 3 skew matrix."""
    j = np.asarray(j, dtype=float)
    if j.shape != (3, 3):
        raise InputError("vector form only exists for d = 3")
    return np.array([j[1, 2], j[2, 0], j[0, 1]])


def angular_momentum_norm(j) -> float:
    """Norm of the skew matrix over the independent entries.

    Equals the Euclidean norm of the usual 3-vector when d = 3.
    """
    j = np.asarray(j, dtype=float)
    return float(np.linalg.norm(j) / np.sqrt(2.0))


def zero_am_projection(q, v, m: MassSystem, allow_rank_deficient: bool = False):
    """Remove the rigid-rotation component of v about the center of mass.

    Returns v' = v - xi (q - q_cm) where the skew matrix xi minimizes the
    kinetic-metric norm of the difference; the minimizer is exactly the one
    that zeroes the angular momentum about the center of mass.  Linear
    momentum is untouched.  Positions of rank < d-1 about the center make xi
    non-unique; that raises unless `allow_rank_deficient`, in which case the
    minimum-norm solution is returned.
    """
    q = _check_config(q, m)
    v = _check_config(v, m, "velocity")
    qc = q - center_of_mass(q, m)[:, None]

    b = (qc * m.masses) @ qc.T  # symmetric PSD
    j = angular_momentum(qc, v, m)

    w, r = np.linalg.eigh(b)
    rank_tol = w[-1] * 1e-12 if w[-1] > 0 else 0.0
    n_null = int(np.sum(w <= rank_tol))
    if n_null >= 2 and not allow_rank_deficient:
        raise RankDeficiencyError(
            "positions span fewer than d-1 dimensions; the rotation fit is "
            "not unique (pass allow_rank_deficient=True for the minimum-norm "
            "solution)"
        )

    jt = r.T @ j @ r
    denom = w[:, None] + w[None, :]
    xi_t = np.zeros_like(jt)
    ok = denom > rank_tol
    xi_t[ok] = -jt[ok] / denom[ok]
    np.fill_diagonal(xi_t, 0.0)
    xi = r @ xi_t @ r.T
    return v - xi @ qc
