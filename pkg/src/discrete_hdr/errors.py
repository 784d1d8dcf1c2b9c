"""Exception hierarchy for discrete_hdr."""


class HdrError(Exception):
    """Base class for every error raised by this package."""


class InvalidMassError(HdrError):
    """A mass function produced a negative or non-finite value."""

    def __init__(self, x, mass):
        super().__init__(f"invalid mass {mass!r} at x={x}")
        self.x = x
        self.mass = mass


class ImproperPmfError(HdrError):
    """Masses do not form a proper probability distribution."""


class DuplicateKeyError(HdrError):
    """A PMF table lists the same element twice."""


class MixtureSpecError(HdrError):
    """Mixture weights or components are malformed."""


class EmptySupportError(HdrError):
    """Support bounds describe an empty set of integers."""


class SequenceIndexError(HdrError, IndexError):
    """Sequence functions are indexed from 1."""


class DuplicateElementError(HdrError):
    """A custom sequence function repeated an element."""

    def __init__(self, element, index):
        super().__init__(
            f"sequence function is not injective: element {element} repeated at index {index}"
        )
        self.element = element
        self.index = index


class TerminationError(HdrError):
    """The iteration cap was hit before the stopping rule held."""

    def __init__(self, visited, out_prob, min_prob):
        super().__init__(
            f"no termination after {visited} visited elements "
            f"(out_prob={out_prob!r}, min_prob={min_prob!r}); "
            "check the support bounds, the sequence function and that the masses sum to 1"
        )
        self.visited = visited
        self.out_prob = out_prob
        self.min_prob = min_prob


class EnumerationTooLargeError(HdrError):
    """Too many canonical regions to list."""


class SupportTooLargeError(HdrError):
    """Support is too large for brute-force enumeration."""


class PreconditionError(HdrError, ValueError):
    """Arguments violate a documented precondition."""


class InvariantViolation(HdrError, AssertionError):
    """Debug-mode solver invariant check failed."""


class DistSpecError(HdrError, ValueError):
    """A distribution spec string could not be parsed."""

    def __init__(self, message, text="", position=None):
        where = "" if position is None else f" at position {position}"
        super().__init__(f"{message}{where}: {text!r}" if text else f"{message}{where}")
        self.text = text
        self.position = position


class TableFormatError(HdrError, ValueError):
    """A PMF table line could not be parsed."""
