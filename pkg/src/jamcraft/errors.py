"""Exception types shared across the package.

The CLI maps these onto exit codes, so solver and harness code should raise
them instead of bare ValueError/RuntimeError wherever the failure is one of
the contract categories below.
"""


class InvalidInputError(ValueError):
    """Non-finite entries, wrong shapes, or mismatched dimensions."""


class DomainError(ValueError):
    """Input outside an operation's mathematical domain (e.g. log-det of a
    matrix that is not positive definite)."""


class DegenerateChannelError(RuntimeError):
    """The jamming channel is (numerically) zero: no eigen-channel carries
    power, so every solver must fall back to the zero covariance."""


class FeasibilityError(RuntimeError):
    """A search that is guaranteed a feasible point by construction found
    none; surfaces numerical-contract violations loudly."""


class ConfigError(ValueError):
    """Experiment configuration rejected; message carries the field path."""
