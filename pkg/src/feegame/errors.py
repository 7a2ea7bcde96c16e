"""Exception types shared across the library."""


class InfeasibleCapacity(ValueError):
    """Block capacity cannot be realized (b exceeds what the pool admits)."""


class BoundViolation(ValueError):
    """A marginal probability lies outside [0, 1]."""

    def __init__(self, index: int, value: float):
        super().__init__(f"q[{index}] = {value} is outside [0, 1]")
        self.index = index
        self.value = value


class SumMismatch(ValueError):
    """Marginal probabilities do not sum to the block capacity."""
