"""Exception types shared across the package."""


class NumericalError(RuntimeError):
    """A numerical procedure failed (non-convergence, missing bracket, ...)."""


class TruncationWarning(UserWarning):
    """Ground-state occupation close to the Fock cutoff; results may not be
    truncation-converged."""
