"""Global sensitivity analysis with polynomial chaos expansions.

Sobol' indices and derivative-based global sensitivity measures (DGSM) are
computed analytically from PCE coefficients; Monte Carlo and Morris
estimators are included as surrogate-free references.
"""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    DegenerateModelError,
    DomainError,
    IllConditionedError,
    ParseError,
    UndefinedIndicesError,
    UnderdeterminedError,
)
from .inputmodel import (
    Design,
    Gamma,
    Gaussian,
    InputModel,
    Uniform,
    cheeger_constant,
    dgsm_prefactor,
    from_standard,
    sample,
    to_standard,
)
from .pce import PCEModel, TruncationSet, eval_basis, eval_model, fit_lar, fit_least_squares, total_degree_set
from .polyfamilies import (
    DerivativeMatrix,
    PolynomialFamily,
    derivative_matrix,
    eval_derivative,
    eval_orthonormal_all,
    gram_matrix,
)
from .reference import CountingModel, dgsm_mc, morris_screening, nu_mc, sobol_mc
from .sensitivity import (
    derivative_expansion,
    dgsm,
    nu,
    pce_mean,
    pce_variance,
    sensitivity_report,
    sobol_first,
    sobol_group,
    sobol_total,
)
