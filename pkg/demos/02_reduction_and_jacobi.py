# Translation reduction: N = d+1 bodies as a d x d matrix.
#
# A mass-orthonormal, zero-sum, oriented basis of the label-space hyperplane
# turns centered configurations into square matrices whose Frobenius norm is
# the kinetic-metric norm.  Coplanarity of the bodies is exactly det = 0 of
# the reduced matrix, which is what the event scanner watches.

import numpy as np

from coplanar import (
    MassSystem,
    angular_momentum,
    angular_momentum_norm,
    center_of_mass,
    embed_configuration,
    mass_norm,
    reduce_configuration,
    signed_distance,
    zero_am_projection,
)

m = MassSystem([1.0, 1.0, 1.0, 1.0])
print("equal-mass Jacobi basis rows:")
print(m.jacobi)

m = MassSystem([1.0, 2.0, 3.0, 4.0])
print("\nmasses (1,2,3,4): Gram matrix under <e_a,e_b> = delta/m_a:")
print(np.round((m.jacobi / m.masses) @ m.jacobi.T, 15))

rng = np.random.default_rng(0)
q = rng.standard_normal((3, 4))
q -= center_of_mass(q, m)[:, None]

x = reduce_configuration(q, m)
print("\ncentered configuration -> reduced matrix; norms match:")
print("  ||q||_mass =", mass_norm(q, m), "  ||X||_F =", np.linalg.norm(x))
print("  embed(reduce(q)) == q:", np.allclose(embed_configuration(x, m), q, atol=1e-14))

q_plane = q.copy()
q_plane[2] = 0.0
print("\ncoplanar bodies give a singular reduced matrix:")
print("  det =", np.linalg.det(reduce_configuration(q_plane, m)))
print("  S   =", signed_distance(reduce_configuration(q_plane, m)))

# Horizontality: velocities orthogonal to the rotation orbit are exactly the
# zero-angular-momentum ones.  The projection strips the rigid rotation.
v = rng.standard_normal((3, 4))
v2 = zero_am_projection(q, v, m)
print("\nangular momentum before/after projection:")
print("  |J(v)| =", angular_momentum_norm(angular_momentum(q, v, m)))
print("  |J(v')| =", angular_momentum_norm(angular_momentum(q, v2, m)))

xi = rng.standard_normal((3, 3))
xi -= xi.T
print("  pure rotation field projects to:", np.abs(zero_am_projection(q, xi @ q, m)).max())
