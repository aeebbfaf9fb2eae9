"""Exception types shared across the toolkit."""


class UsageError(ValueError):
    """Caller passed arguments that violate an interface contract
    (dimension mismatch, bad option, non-positive step size, ...)."""


class NumericInputError(ValueError):
    """An input array contains NaN or infinite entries."""


class StageNumericError(ArithmeticError):
    """A non-finite value appeared while evaluating an OCP stage."""

    def __init__(self, message: str, stage: int):
        super().__init__(f"{message} (stage {stage})")
        self.stage = stage
