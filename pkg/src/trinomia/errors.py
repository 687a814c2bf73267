"""Exception hierarchy shared by the solver, verification and CLI layers."""


class TrinomiaError(Exception):
    pass


class OutsideDiscError(TrinomiaError, ValueError):
    """Argument lies outside the disc where the series is used."""


class BudgetExceededError(TrinomiaError, RuntimeError):
    """Requested accuracy not reached within the term budget."""

    def __init__(self, message, best_bound=None, terms_used=None):
        super().__init__(message)
        self.best_bound = best_bound
        self.terms_used = terms_used


class ShiftUndefinedError(TrinomiaError, ValueError):
    """A parameter shift would produce a zero parameter."""


class NonConvergenceError(TrinomiaError, RuntimeError):
    pass


class BranchPointError(TrinomiaError, ValueError):
    """The parameter is too close to a point where two roots collide."""
