"""Numerical laboratory for degeneration crossings in the d+1-body problem.

Simulates N = d+1 point masses in d-dimensional space under attractive pair
potentials, tracks the signed Frobenius distance from the translation-reduced
configuration to the coplanarity locus {det = 0}, detects and classifies the
crossing instants, and verifies the oscillation window bound
pi * sqrt(c^3 / (G M)) (Newtonian; pi / sqrt(G M delta) in general) on
zero-angular-momentum bounded runs.
"""

from .errors import (
    CatalogError,
    CollisionError,
    CoplanarError,
    InputError,
    IntegrationError,
    NotDegenerateError,
    PotentialHypothesisError,
    RankDeficiencyError,
)
from .linalg import PseudoSVDResult, is_degenerate, pseudo_svd, signed_distance, singular_margin
from .reduction import (
    MassSystem,
    angular_momentum,
    angular_momentum_norm,
    angular_momentum_vector,
    center_of_mass,
    embed_configuration,
    jacobi_basis,
    kinetic_energy,
    linear_momentum,
    mass_norm,
    reduce_configuration,
    zero_am_projection,
)
from .potentials import (
    PairPotential,
    acceleration,
    degeneration_window,
    delta_bound,
    oscillator_frequency,
    potential_value,
)
from .dynamics import ConservationReport, IntegratorConfig, State, Trajectory, dense_eval, integrate
from .events import DegenerationEvent, NONGENERIC, classify_shape, scan_degenerations, symbol_sequence
from .oscillation import (
    GEstimate,
    NormalGeodesicProbe,
    OscillationReport,
    SegmentReport,
    check_concavity_segments,
    check_window_bound,
    estimate_g_series,
    normal_geodesic_probe,
)
from .scenarios import ScenarioData, make_scenario, scenario_catalog

__version__ = "0.1.0"
