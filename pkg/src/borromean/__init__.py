"""Redei triple symbols, Borromean primes and their densities."""

from .arith import jacobi, legendre, log_integral, sieve_primes, sqrt_mod
from .chebotarev import check_bound, empirical_split_count, field_params, grh_error_bound
from .density import (
    character_sum_E,
    count_pairs,
    count_triples,
    rho_count,
    sweep,
)
from .redei import (
    admissible_pair,
    classify_triple,
    normalize_solution,
    redei_symbol,
    solve_ternary,
    splitting_oracle,
)

__version__ = "0.1.0"
