"""Exception types shared across the package."""


class ZKernelError(Exception):
    """Base class for all library errors."""


class PoleError(ZKernelError):
    """An argument landed on (or within tolerance of) a gamma pole."""


class DomainError(ZKernelError):
    """Input outside the domain where a formula is valid."""


class ConstraintError(ZKernelError):
    """A required parameter constraint (e.g. series balance) is violated."""


class DivergenceError(ZKernelError):
    """A series failed to converge within the iteration budget."""


class SizeError(ZKernelError):
    """An enumeration would exceed the configured size cap."""


class SolveError(ZKernelError):
    """A dense linear solve failed or is numerically unreliable."""


class SpectrumError(ZKernelError):
    """A kernel matrix has eigenvalues outside the admissible band."""


class SubsetError(ZKernelError):
    """A point configuration is not contained in the claimed ground set."""


class NearDegenerateWarning(UserWarning):
    """Parameters are within tolerance of a removable singularity;
    the value was obtained by symmetric perturbation."""
