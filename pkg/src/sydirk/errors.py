"""Exception types raised across the package."""


class SydirkError(Exception):
    """Base class for all errors raised by this package."""


class ZeroWeight(SydirkError, ValueError):
    pass


class UnknownName(SydirkError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class OrderCycle(SydirkError):
    """The nonzero pattern of ``a`` contains a cycle although the
    projectability residual passed; the tolerance is too loose."""

    def __init__(self, cycle, tol):
        self.cycle = tuple(cycle)
        self.tol = tol
        stages = " -> ".join(str(i + 1) for i in self.cycle)
        super().__init__(f"stage order contains a cycle ({stages}) at tol={tol:g}")


class DimensionMismatch(SydirkError, ValueError):
    pass


class NonConvergence(SydirkError):
    """An implicit stage equation did not converge.

    ``step`` and the partial ``record`` are filled in by the trajectory
    drivers.
    """

    record = None

    def __init__(self, stage, iterations, residual, step=None):
        self.stage = stage
        self.iterations = iterations
        self.residual = residual
        self.step = step
        super().__init__(self._message())

    def _message(self):
        where = f"stage {self.stage}" if self.stage is not None else "coupled stages"
        msg = f"{where} did not converge after {self.iterations} iterations (residual {self.residual:.3e})"
        if self.step is not None:
            msg += f" at step {self.step}"
        return msg

    def at_step(self, step):
        self.step = step
        self.args = (self._message(),)
        return self


class NotEquivariant(SydirkError, ValueError):
    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"tableau violates the symplecticity condition (residual {residual:.3e})")


class SingularFactor(SydirkError):
    pass


class DegenerateSpectrum(SydirkError):
    """Eigenvalues of ``z`` collide or approach zero, so the L/P splitting
    is undefined."""

    record = None

    def __init__(self, message, gap=None, step=None):
        self.gap = gap
        self.step = step
        self.detail = message
        super().__init__(message)

    def at_step(self, step):
        self.step = step
        self.args = (f"{self.detail} at step {step}",)
        return self


class NotAntiHermitian(SydirkError, ValueError):
    pass
