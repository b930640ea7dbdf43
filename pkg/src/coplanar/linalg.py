"""Square-matrix primitives for the distance to the determinant-zero cone.

A d x d matrix q factors as q = g1 @ diag(x) @ g2.T with g1, g2 in SO(d) and
x[0] >= ... >= x[d-2] >= |x[d-1]|, where only the last diagonal entry may be
negative and carries the sign of det(q).  The last entry is the signed
Frobenius distance from q to the hypersurface {det = 0}; the gap between the
two smallest magnitudes tells how far q is from the locus where that distance
function loses smoothness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError

__all__ = ["PseudoSVDResult", "pseudo_svd", "signed_distance", "singular_margin", "is_degenerate"]

# |S| below this times ||q|| counts as exactly on {det = 0} in reports:
# floating-point determinants of near-singular matrices are noise-dominated
# below it.
ON_SIGMA_RTOL = 1e-13


@dataclass(frozen=True)
class PseudoSVDResult:
    """Rotation-rotation normal form of a square matrix.

    The diagonal `x` is unique; the rotations are not when principal values
    coincide.  `g1` and `g2` have determinant +1 by construction.
    """

    g1: np.ndarray
    x: np.ndarray
    g2: np.ndarray

    @property
    def d(self) -> int:
        return self.x.size

    def reconstruct(self) -> np.ndarray:
        """Return g1 @ diag(x) @ g2.T."""
        return (self.g1 * self.x) @ self.g2.T


def _as_square(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise InputError(f"expected a square matrix, got shape {q.shape}")
    if not np.all(np.isfinite(q)):
        raise InputError("matrix entries must be finite")
    return q


def pseudo_svd(q) -> PseudoSVDResult:
    """Factor q = g1 @ diag(x) @ g2.T with g1, g2 special-orthogonal.

    A standard SVD allows reflections in its orthogonal factors.  Flipping the
    last column of an improper factor (and the sign of the last diagonal
    entry, once per flip) restores det = +1 without disturbing the descending
    order of the leading entries, so the result satisfies
    x[0] >= ... >= x[d-2] >= |x[d-1]| and sign(x[-1]) = sign(det q).
    """
    q = _as_square(q)
    u, s, vt = np.linalg.svd(q)
    x = s.copy()
    g1 = u
    g2 = vt.T
    if np.linalg.det(g1) < 0:
        g1 = g1.copy()
        g1[:, -1] = -g1[:, -1]
        x[-1] = -x[-1]
    if np.linalg.det(g2) < 0:
        g2 = g2.copy()
        g2[:, -1] = -g2[:, -1]
        x[-1] = -x[-1]
    return PseudoSVDResult(g1=g1, x=x, g2=g2)


def signed_distance(q) -> float:
    """Signed Frobenius distance from q to the singular matrices {det = 0}.

    The magnitude is the smallest singular value (the Eckart-Young distance
    to the nearest rank-deficient matrix); the sign is the sign of det(q).
    """
    q = _as_square(q)
    u, s, vt = np.linalg.svd(q)
    # det(u), det(vt) are each +-1; their product flips the smallest value's
    # sign exactly when det(q) < 0.
    orient = np.sign(np.linalg.det(u)) * np.sign(np.linalg.det(vt))
    return float(s[-1] * orient)


def is_degenerate(q, rtol=ON_SIGMA_RTOL) -> bool:
    """Whether q should be reported as lying on the degeneration locus."""
    q = _as_square(q)
    norm = np.linalg.norm(q)
    if norm == 0.0:
        return True
    return abs(signed_distance(q)) < rtol * norm


def singular_margin(q) -> float:
    """Gap x[d-2] - |x[d-1]| between the two smallest principal values.

    Zero exactly on the locus where the signed distance is not smooth (the
    two smallest singular values coincide); positive elsewhere.  Useful as a
    gate before differentiating the signed distance numerically.
    """
    q = _as_square(q)
    if q.shape[0] < 2:
        raise InputError("singular margin needs a matrix of size >= 2")
    s = np.linalg.svd(q, compute_uv=False)
    return float(s[-2] - s[-1])
