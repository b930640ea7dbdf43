"""Exception types shared across the package."""


class CoplanarError(Exception):
    """Base class for errors raised by this package."""


class InputError(CoplanarError, ValueError):
    """Malformed input: non-finite entries, bad shapes, non-positive masses."""


class CollisionError(CoplanarError):
    """Two bodies coincide, or a run fell below the collision guard radius."""


class RankDeficiencyError(CoplanarError):
    """Configuration rank is too low for the requested operation."""


class PotentialHypothesisError(CoplanarError):
    """A pair potential fails the attractive/concave shape requirements."""


class NotDegenerateError(CoplanarError):
    """Shape classification was asked for a non-degenerate configuration."""


class CatalogError(CoplanarError, KeyError):
    """Unknown scenario name."""


class IntegrationError(CoplanarError):
    """The integrator failed before reaching t_end.

    The partial trajectory, when one exists, is attached as `.trajectory`.
    """

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory
