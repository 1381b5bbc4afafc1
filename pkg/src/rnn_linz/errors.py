"""Exception types shared across the package."""


class RnnLinzError(Exception):
    """Base class for all errors raised by rnn_linz."""


class NonFiniteError(RnnLinzError, ValueError):
    """An input contains NaN or infinity."""


class ShapeMismatchError(RnnLinzError, ValueError):
    """Vector or matrix dimensions are inconsistent with the model size."""


class InverseRangeError(RnnLinzError, ValueError):
    """A value lies at or outside the range of the nonlinearity."""

    def __init__(self, index, value, message=None):
        self.index = int(index)
        self.value = float(value)
        super().__init__(
            message or f"value {value!r} at index {index} is outside the invertible range"
        )


class DivergenceError(RnnLinzError):
    """A simulated state became non-finite or exceeded the divergence norm."""

    def __init__(self, step, message=None):
        self.step = int(step)
        super().__init__(message or f"state diverged at step {step}")


class NonConvergenceError(RnnLinzError):
    """The fixed-point solver did not reach the requested residual."""

    def __init__(self, best_residual, iterations):
        self.best_residual = float(best_residual)
        self.iterations = int(iterations)
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(best residual {best_residual:.3e})"
        )


class SingularJacobianError(RnnLinzError):
    """The Newton system is numerically singular; retry from a new guess."""

    def __init__(self, cond_estimate):
        self.cond_estimate = float(cond_estimate)
        super().__init__(
            f"Newton Jacobian numerically singular (condition estimate {cond_estimate:.3e})"
        )


class NearZeroGainError(RnnLinzError):
    """A diagonal gain is too close to zero to invert."""

    def __init__(self, index, value):
        self.index = int(index)
        self.value = float(value)
        super().__init__(f"gain {value!r} at index {index} is below the invertibility threshold")


class ZeroProbeError(RnnLinzError, ValueError):
    """The probe input vector is zero; no direction to compare."""


class EigensolverError(RnnLinzError):
    """The dense eigensolver failed; carries condition diagnostics."""

    def __init__(self, message, cond_estimate=None):
        self.cond_estimate = cond_estimate
        super().__init__(message)


class ConfigError(RnnLinzError, ValueError):
    """A model or experiment file failed to parse or validate."""

    def __init__(self, path, field, message):
        self.path = str(path)
        self.field = str(field)
        super().__init__(f"{path}: field '{field}': {message}")
