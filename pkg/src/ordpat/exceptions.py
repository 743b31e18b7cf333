"""Shared warning and error types."""


class NumericalWarning(UserWarning):
    """A computation hit a degenerate or truncated numerical case.

    Raised-as-warning for e.g. negative long-run-variance estimates
    truncated to zero, degenerate marginals in the standardized
    coefficient, or small-sample significance tests. The CLI escalates
    these to a nonzero exit code under --strict.
    """


class DataFormatError(ValueError):
    """A data file failed validation; message carries row/column context."""
