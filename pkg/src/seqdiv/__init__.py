"""Exact densities of primes in a residue class dividing a^k + b^k."""

from .arith import (
    INFINITY,
    DegenerateRatioError,
    DomainError,
    kronecker,
    mod_pow,
    perfect_power_decompose,
    quad_discriminant,
    squarefree_signed,
    v2,
)
from .empirical import (
    EmpiricalCount,
    count_up_to,
    divides_sequence,
    fermat_counterexamples,
    scan_classes,
    two_adic_index_class,
)
from .extremal import Extremal, ExtremalClass, classify_extremal, tau_p_parity_witness
from .params import DensityCase, InvalidClassError, Params, classify, extract_params
from .series import density_series
from .tables import DensityResult, density, density_table0, dump_tables, relative_density

__version__ = "0.1.0"
