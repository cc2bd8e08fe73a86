"""Exception hierarchy for the roulette engine."""


class RouletteError(ValueError):
    """Base class for all validation errors raised by the engine."""


class DimensionError(RouletteError):
    pass


class CapacityError(RouletteError):
    pass


class NotUnitaryError(RouletteError):
    def __init__(self, residual: float, tol: float):
        self.residual = residual
        self.tol = tol
        super().__init__(f"matrix is not unitary: ||U U^dag - I||_F = {residual:.3e} > {tol:.1e}")


class InvalidStateError(RouletteError):
    pass


class InvalidStrategyError(RouletteError):
    pass


class InvalidChannelError(RouletteError):
    pass
