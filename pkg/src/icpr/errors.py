"""Exception hierarchy shared by the icpr modules."""


class ICPRError(Exception):
    """Base class for every error raised by this package."""


class NotRepresentable(ICPRError, ValueError):
    """The number has no sum-of-squares representation with the allowed term count."""


class NotDNN(ICPRError, ValueError):
    """The matrix is not doubly nonnegative."""


class OutOfRange(ICPRError, ValueError):
    """A target exceeds the squared norm of the spanning candidate."""


class BadRange(ICPRError, ValueError):
    """Off-diagonal target is not strictly below the diagonal entry."""


class TraceMismatch(ICPRError, ValueError):
    """A decomposition does not match the matrix a reduction trace ends at."""


class WidthOverflow(ICPRError, RuntimeError):
    """Internal guarantee violated: a certificate would need more than 10 columns."""


class RepairGap(ICPRError, RuntimeError):
    """Some bad residue triplet has no repair pair in the pool."""


class BudgetExceeded(ICPRError):
    """Exact search ran out of budget.

    ``reason`` is ``"width"`` when no decomposition exists within the width cap
    and ``"nodes"`` when the node limit was hit first; the two are different
    claims and callers must not conflate them.
    """

    def __init__(self, reason: str, message: str = ""):
        self.reason = reason
        super().__init__(message or f"search budget exceeded ({reason})")
