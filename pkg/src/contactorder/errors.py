"""Exception hierarchy shared by all modules."""


class ContactOrderError(Exception):
    """Base class for errors raised by this package."""


class HermitianError(ContactOrderError):
    """A coefficient map violates the real-valuedness pairing."""


class TruncationError(ContactOrderError):
    """A coefficient beyond the trusted truncation degree was requested."""


class JetLengthError(ContactOrderError):
    """An operation needs jet coefficients beyond the stored jet length."""


class NotBasedAtZeroError(ContactOrderError):
    """The defining function does not vanish at the origin."""


class DegenerateGradientError(ContactOrderError):
    """The gradient of the defining function vanishes where it must not."""


class DegenerateBlockError(ContactOrderError):
    """Exact congruence hit an all-zero diagonal with off-diagonal coupling."""

    def __init__(self, i, j, block):
        self.indices = (i, j)
        self.block = block
        super().__init__(
            f"no admissible diagonal pivot: zero diagonal with coupling at "
            f"({i},{j}), 2x2 block {block}"
        )


class SearchBudgetError(ContactOrderError):
    """The requested enumeration exceeds the configured budget."""


class SurfaceSyntaxError(ContactOrderError):
    """Parse failure, with the offset of the offending token."""

    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} (offset {position})")


class PreconditionError(ContactOrderError):
    """A documented operation precondition was violated by the caller."""
