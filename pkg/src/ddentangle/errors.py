"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: configuration problems exit
with 2, numerical non-convergence with 3, integrity violations with 4.
"""


class DdentangleError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(DdentangleError):
    """Invalid or inconsistent user-supplied configuration."""

    exit_code = 2


class NonConvergedError(DdentangleError):
    """A numerical procedure failed to reach its requested accuracy."""

    exit_code = 3


class IntegrityError(DdentangleError):
    """A computed object violated an invariant it must satisfy."""

    exit_code = 4
