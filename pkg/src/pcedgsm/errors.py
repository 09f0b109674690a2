"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the support of a distribution or polynomial family."""


class CapacityError(ValueError):
    """A requested truncation set would be too large to materialise."""


class UnderdeterminedError(ValueError):
    """Fewer samples than unknown coefficients."""


class IllConditionedError(ValueError):
    """The regression matrix is numerically rank deficient."""


class UndefinedIndicesError(ValueError):
    """Sensitivity indices requested for a model with zero variance."""


class DegenerateModelError(ValueError):
    """Monte Carlo variance estimate is not positive."""


class ParseError(ValueError):
    """Malformed input file."""
