"""Exception types shared across the package.

Every error raised on a bad input derives from :class:`ScaleLabError`, so
callers (and the command-line layer) can distinguish data and dimension
problems from genuine bugs.
"""


class ScaleLabError(Exception):
    """Base class for all errors raised by scalelab."""


class CapacityError(ScaleLabError):
    """A rational exponent exceeded the supported integer range.

    Dimension exponents are tiny fractions in practice, so hitting this
    signals a bug in the caller, not a scale problem.
    """


class DimensionMismatchError(ScaleLabError):
    """Two quantities or units of incompatible dimension were combined."""

    def __init__(self, left, right, context: str = ""):
        self.left = left
        self.right = right
        detail = f"incommensurable dimensions [{left}] and [{right}]"
        if context:
            detail = f"{context}: {detail}"
        super().__init__(detail)


class UnknownUnitError(ScaleLabError):
    """A unit symbol is not registered."""

    def __init__(self, symbol: str):
        self.symbol = symbol
        super().__init__(f"unknown unit symbol {symbol!r}")


class QuantityParseError(ScaleLabError):
    """Text did not match the quantity or unit-expression grammar."""


class RelationError(ScaleLabError):
    """A scaling relation was constructed or combined incorrectly."""


class DerivationError(ScaleLabError):
    """A dimensional derivation has no usable answer."""


class InconsistentDimensionsError(DerivationError):
    """The target dimension lies outside the span of the parameters."""


class UnderdeterminedError(DerivationError):
    """The parameters admit more than one exponent combination.

    ``free_directions`` counts the independent dimensionless groups the
    parameter set carries; a caller seeing this should switch to a
    dimensionless-group analysis instead of a direct solve.
    """

    def __init__(self, free_directions: int):
        self.free_directions = free_directions
        super().__init__(
            f"underdetermined: {free_directions} free direction(s); "
            "the parameter set admits that many surplus dimensionless groups"
        )


class DataError(ScaleLabError):
    """A dataset, CSV file, or regression input is unusable."""


class CollinearityError(DataError):
    """The regression design matrix is rank deficient."""

    def __init__(self, columns):
        self.columns = tuple(columns)
        super().__init__(
            "collinear design; offending column(s): " + ", ".join(self.columns)
        )
