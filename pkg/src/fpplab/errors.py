"""Exception types shared across the library."""


class FppError(Exception):
    """Base class for all fpplab errors."""


class InvalidSpec(FppError):
    """Domain specification violates a structural requirement."""


class EmptyBoundary(FppError):
    """The requested window contains no boundary vertices."""


class BadRemovedSet(FppError):
    """Removal set violates its preconditions."""


class OutOfWindow(FppError):
    """A vertex or box falls outside the domain window."""


class Disconnected(FppError):
    """No admissible path joins the requested endpoints."""


class NoCrossing(FppError):
    """No constrained crossing exists in the box."""


class NotBoundaryVertices(FppError):
    """Arguments must be boundary vertices in increasing index order."""


class Uncertified(FppError):
    """A computation required certified passage times but could not get them."""


class UnboundedSupport(FppError):
    """Operation requires a weight law with bounded support."""


class NegativeValue(FppError):
    """Edge weights and overrides must be nonnegative."""


class UnstabilizedRay(FppError):
    """Ray following hit an edge that has not stabilized."""


class BadInputs(FppError):
    """Path surgery inputs violate the enclosure preconditions."""


class HypothesisViolated(FppError):
    """The weight law violates a hypothesis of the requested estimator."""


class ConfigError(FppError):
    """Experiment configuration is malformed."""


class InvariantViolation(FppError):
    """An exact structural invariant failed; indicates a bug or bad data."""


class MissingData(FppError):
    """Rendering input files are absent or incomplete."""
