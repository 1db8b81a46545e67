"""Exception types shared across the package."""


class NonConvergenceError(RuntimeError):
    """An iterative numerical procedure exhausted its budget.

    Carries the last two estimates (when available) so callers can report
    how far the computation got.
    """

    def __init__(self, message, last_estimates=None):
        super().__init__(message)
        self.last_estimates = last_estimates
