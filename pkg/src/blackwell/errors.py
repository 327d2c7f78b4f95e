"""Exception hierarchy shared by all modules."""


class BlackwellError(Exception):
    """Base class for every error raised by this package."""


class SpecError(BlackwellError):
    """A game spec file could not be parsed or fails validation."""


class PreconditionError(BlackwellError, ValueError):
    """An operation was called outside its documented domain."""


class UnsupportedObjectiveError(BlackwellError):
    """The objective family is not handled by the requested operation."""


class SolverError(BlackwellError):
    """A numerical kernel failed to produce a certified answer."""


class InfeasibleError(BlackwellError):
    """No object satisfying the requested constraints exists.

    ``report`` carries a JSON-compatible description of the violated
    constraints.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}


class ResourceError(BlackwellError):
    """A configured enumeration or size cap was exceeded.

    ``best`` holds the best partial result found before giving up, if any.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class InvalidPlayError(BlackwellError, ValueError):
    """A play contains a profile that is not formable from the spec's actions."""
