"""Exception types shared across the package.

Everything derives from ValueError so careless callers still get a sane
exception class, but tests and the CLI can distinguish failure modes.
"""


class ConfigurationError(ValueError):
    """A scenario config field is missing, malformed, or out of range."""


class TopologyError(ValueError):
    """Topology construction or base-station association failed."""


class ModelApplicabilityError(ValueError):
    """Input falls outside the validity region of the aerial channel model."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of a special function."""


class DegeneratePoleError(ValueError):
    """Two transform poles (nearly) coincide; partial fractions are singular."""


class NumericalInstabilityError(ValueError):
    """A numerical result is too corrupted to trust.

    Carries the raw offending value in ``raw`` so callers can report it.
    """

    def __init__(self, message, raw=None):
        super().__init__(message)
        self.raw = raw


class NonConvergenceError(RuntimeError):
    """An iterative procedure hit its iteration cap without terminating."""
