"""Exception types shared across the package."""


class LascarLabError(Exception):
    """Base class for errors raised by this package."""


class BackendMismatch(LascarLabError):
    """An element or object from one backend was passed to another."""


class InsufficientWindow(LascarLabError):
    """A window is too small for the requested computation."""


class ArityError(LascarLabError):
    """Tuples of different lengths were compared."""


class PreconditionError(LascarLabError):
    """An operation was called outside its domain."""


class BoundExceeded(LascarLabError):
    """A configured size bound (domain size, group order, triple count) was exceeded."""


class NoSupport(LascarLabError):
    """No closed set sandwiches the given subgroup (or more than one minimal one does)."""

    def __init__(self, message, subgroup=None, candidates=()):
        super().__init__(message)
        self.subgroup = subgroup
        self.candidates = tuple(candidates)


class NonUniqueness(LascarLabError):
    """Two incomparable minimal candidates were found where a least one was expected."""

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


class NotAnIsomorphism(LascarLabError):
    """A window map failed one of the expanded-structure predicates."""

    def __init__(self, message, predicate=None, instance=None):
        super().__init__(message)
        self.predicate = predicate
        self.instance = instance


class WindowOverflow(LascarLabError):
    """An image escaped the window; ``required`` is the window size that would contain it."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class Inapplicable(LascarLabError):
    """The operation does not apply to this backend."""


class UsageError(LascarLabError):
    """Invalid run configuration or command line."""
