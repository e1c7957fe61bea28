"""
Maxmin (MM) and reflected maxmin (RMM) shock-model copulas.

The package evaluates bivariate MM/RMM transforms, their iterates and limit
copulas, the n-variate constructions, dependence measures and samplers.
"""
from .copula import (
    BivariateCopula,
    Rectangle,
    builtin,
    clayton,
    efgm,
    flip_first,
    flip_second,
    independence,
    lower_bound,
    upper_bound,
    validate_copula,
    volume,
)
from .document import parse_spec
from .errors import ConvergenceError, DomainError, SamplingError, SpecError, ValidationError
from .generators import (
    Generator,
    MMGenerator,
    compute_alpha,
    from_function,
    from_mm,
    from_mm_psi,
    mm_identity,
    mm_power,
    power,
    quadratic,
    scaled_complement,
    tabulated,
    tent,
    to_mm,
    trunc_linear,
    validate_g,
    zero,
)
from .measures import estimate_measures, kendall_tau, quadrant_class, spearman_rho, table_run, tail_coefficients
from .multivariate import MMNSpec, NCopula, flip_vars, m_n, mm_n, pi_n, rmm_3, rmm_n, validate_ncopula
from .sampling import export_csv, read_csv, sample2, sample3
from .transforms import mm, mm_iter, mm_limit, rmm, rmm_iter, rmm_limit

__version__ = "0.1.0"
