# Straight-line probes normal to the coplanar set.
#
# From a planar base configuration, moving every body along the common
# normal axis with zero total momentum and zero angular momentum keeps the
# pair distances on the exact law r_ab(t)^2 = r_ab(0)^2 + t^2 |v_ab|^2, and
# S(t) = t while the line stays the nearest return path.  Along it, the
# potential term of S'' has the closed form
#     g1(t) = G sum_{a<b} m_a m_b (f'(r_ab)/r_ab) |v_ab|^2,
# which this demo checks against finite differences of S.

import numpy as np

from coplanar import MassSystem, PairPotential, normal_geodesic_probe

m = MassSystem([1.0] * 4)
square = np.array(
    [[-0.5, 0.5, 0.5, -0.5], [-0.5, -0.5, 0.5, 0.5], [0.0, 0.0, 0.0, 0.0]]
)
t_values = np.linspace(0.05, 0.6, 8)

for pot, label in [
    (PairPotential.newtonian(), "newtonian (f = -1/r)"),
    (PairPotential.power_law(alpha=2.0, k=1.0), "power law (f = -1/r^2)"),
]:
    probe = normal_geodesic_probe(square, m, pot, t_values)
    print(label)
    print("  normal velocities (z-components):", np.round(probe.v[2], 6))
    print("  pair-distance law max error:", probe.r_sq_max_error)
    print("  S(t) vs t:", np.max(np.abs(probe.s_values - probe.t_values)))
    print("  t, analytic g1, finite-difference g1:")
    for t, ga, gn in zip(probe.t_values, probe.g1_analytic, probe.g1_numeric):
        print(f"    {t:4.2f}  {ga:.10f}  {gn:.10f}")
    print()
