"""
gitangle custom exceptions.

Every message says what went wrong and how to fix it. The CLI maps the
three families to exit codes: ValidationError -> 1,
NumericalFailureError -> 2, BudgetExhaustedError -> 3.
"""

from typing import Optional, Sequence


class GitangleError(Exception):
    """Base exception for all gitangle errors."""
    pass


class ValidationError(GitangleError):
    """Input does not describe a valid system, state or parameter set."""
    pass


class DimensionMismatchError(ValidationError):
    """Raised when a state and an operator basis disagree on dimension."""

    def __init__(self, expected: int, actual: int, what: str = "state"):
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"{what} has dimension {actual} but the system acts on dimension {expected}. "
            f"Check that --system matches the dims of the state file."
        )


class DimensionCapError(ValidationError):
    """Raised when a Hilbert space exceeds the configured dimension cap."""

    def __init__(self, dims: Sequence[int], total: int, cap: int):
        self.dims = list(dims)
        self.total = total
        self.cap = cap
        super().__init__(
            f"Hilbert space {'x'.join(str(d) for d in dims)} has dimension {total}, "
            f"above the cap of {cap}. Raise dimension_cap in the params file if this is intended."
        )


class FactorIndexError(ValidationError):
    """Raised when a tensor factor index is out of range."""

    def __init__(self, index: int, n_factors: int):
        self.index = index
        self.n_factors = n_factors
        super().__init__(
            f"Factor index {index} is out of range; the state has {n_factors} "
            f"factor(s), use an index in 0..{n_factors - 1}."
        )


class FactorCountError(ValidationError):
    """Raised when an operation needs a specific tensor format."""

    def __init__(self, operation: str, required: str, dims: Sequence[int]):
        super().__init__(
            f"{operation} requires {required}, got dims {list(dims)}. "
            f"Pass a state with the required factorization."
        )


class StateNormError(ValidationError):
    """Raised when amplitudes are not normalized and not flagged as such."""

    def __init__(self, norm: float, tol: float):
        self.norm = norm
        super().__init__(
            f"State norm is {norm:.12g}, not 1 within {tol:g}. "
            f"Normalize the amplitudes or mark the state \"unnormalized\": true."
        )


class ZeroStateError(ValidationError):
    """Raised when an operation needs a nonzero vector."""

    def __init__(self, operation: str):
        super().__init__(f"{operation} is undefined for the zero vector. Provide a nonzero state.")


class SystemSpecError(ValidationError):
    """Raised when a system descriptor cannot be parsed."""

    ACCEPTED = ("spin:<two_s>", "local:<d1>x<d2>[x...]", "sym:<d>^<n>", "wedge:<d>^<n>")

    def __init__(self, spec: str, reason: Optional[str] = None):
        self.spec = spec
        msg = f"Cannot parse system '{spec}'"
        if reason:
            msg += f" ({reason})"
        msg += f". Accepted forms: {', '.join(self.ACCEPTED)}."
        super().__init__(msg)


class StateFileError(ValidationError):
    """Raised when a state or params file is malformed."""

    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(f"Invalid file '{path}': {reason}")


class PentagramError(ValidationError):
    """Raised when five vectors do not form a pentagram."""
    pass


class DirectionError(ValidationError):
    """Raised when a measurement direction is not a unit 3-vector."""

    def __init__(self, name: str, norm: float):
        super().__init__(
            f"Direction {name} has norm {norm:.12g}; CHSH settings must be unit 3-vectors."
        )


class NumericalFailureError(GitangleError):
    """Raised when a computation produces non-finite numbers."""

    def __init__(self, where: str, iteration: Optional[int] = None):
        self.where = where
        self.iteration = iteration
        msg = f"Non-finite values encountered in {where}"
        if iteration is not None:
            msg += f" at iteration {iteration}"
        msg += ". Try a smaller step or check the input amplitudes."
        super().__init__(msg)


class BudgetExhaustedError(GitangleError):
    """Raised when a search ends without a verdict."""

    def __init__(self, what: str, best_value: float, budget: int):
        self.best_value = best_value
        self.budget = budget
        super().__init__(
            f"{what} ended without a verdict within {budget} evaluations; best value {best_value:.9f}. "
            f"The result is inconclusive, not a counterexample. Increase the search budget."
        )
