# Signed distance to the degenerate (zero-determinant) matrices.
#
# Every square matrix factors as g1 @ diag(x) @ g2.T with both factors in
# SO(d) and x[0] >= ... >= x[d-2] >= |x[d-1]|.  The last entry is the signed
# Frobenius distance S to the singular matrices: |S| is the usual smallest
# singular value, and its sign tracks the orientation det(q).

import numpy as np

from coplanar import pseudo_svd, signed_distance, singular_margin

rng = np.random.default_rng(7)

print("A diagonal matrix is its own normal form:")
res = pseudo_svd(np.diag([2.0, 1.0, 0.5]))
print("  x =", res.x)

print("\nAn orientation-reversing matrix pushes the sign into the last entry:")
res = pseudo_svd(np.diag([-1.0, 1.0, 1.0]))
print("  x =", res.x, " det g1 =", np.linalg.det(res.g1), " det g2 =", np.linalg.det(res.g2))

print("\nRandom 3x3 matrix:")
q = rng.standard_normal((3, 3))
res = pseudo_svd(q)
print("  x =", res.x)
print("  reconstruction error =", np.linalg.norm(res.reconstruct() - q))
print("  S =", signed_distance(q), " (sign of det:", np.sign(np.linalg.det(q)), ")")
print("  margin x[d-2] - |x[d-1]| =", singular_margin(q))

# On diagonal matrices the degenerate set is the union of the coordinate
# hyperplanes, so S is the smallest |entry| with the sign of the product.
print("\nOn diagonals S = sign(prod) * min |entry|:")
for _ in range(3):
    x = rng.uniform(-2, 2, 3)
    print(f"  diag({np.round(x, 3)})  ->  S = {signed_distance(np.diag(x)):+.6f}")

# The distance is 1-Lipschitz and scales linearly: it is a cone distance.
q2 = rng.standard_normal((3, 3))
print("\n|S(q) - S(q')| <= ||q - q'||_F :",
      abs(signed_distance(q) - signed_distance(q2)) <= np.linalg.norm(q - q2))
lam = 3.7
print("S(lam q) == lam S(q):", np.isclose(signed_distance(lam * q), lam * signed_distance(q)))

# Where the two smallest magnitudes tie, S stops being smooth; the margin
# flags that set (it has codimension 2, so generic paths avoid it).
print("\nmargin at the identity (all principal values equal):", singular_margin(np.eye(3)))
