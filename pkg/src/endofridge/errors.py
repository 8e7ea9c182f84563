"""Exception and warning types raised across the package."""


class EndofridgeError(Exception):
    """Base class for all package errors."""


class DomainError(EndofridgeError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class DegeneracyError(EndofridgeError):
    """The stationary state is not unique (rank-deficient generator)."""


class NumericalFailure(EndofridgeError):
    """A solver produced a result that violates its own post-conditions."""


class ModelViolationError(EndofridgeError):
    """A thermodynamic law is violated beyond round-off; indicates a bug."""


class NoRefrigerationError(EndofridgeError):
    """The cooling rate is non-positive everywhere in the search window."""


class EmptyWindowError(EndofridgeError):
    """The admissible cold-frequency window is empty."""


class BracketError(EndofridgeError):
    """No interior maximum could be bracketed."""


class SpecError(EndofridgeError, ValueError):
    """A sweep specification cannot be sampled."""


class WeakCouplingWarning(UserWarning):
    """Dissipation strength is not small compared with the bath temperature."""


class EdgeOptimumWarning(UserWarning):
    """The maximum sits at the edge of the search window."""
