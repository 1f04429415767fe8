"""Discriminants of the fields attached to a pair and the GRH-effective bound.

Two fields per admissible pair:

* ``SMALL`` = Q(sqrt(p1), sqrt(p2), sqrt(-1)), degree 8, discriminant 2^8 p1^4 p2^4;
* ``LARGE`` = k(sqrt(-1)) with k the Redei field, degree 16, discriminant 2^16 p1^8 p2^8.

A prime splits completely in SMALL iff p = 1 (mod 4) and (p1/p) = (p2/p) = 1,
and in LARGE iff additionally [p1, p2, p] = +1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import legendre_block, log_integral, sieve_primes
from .errors import ConsistencyError, InvalidArgumentError
from .redei import AdmissiblePair, redei_unchecked

SMALL = "k1k2(sqrt-1)"
LARGE = "k(sqrt-1)"
LABELS = (SMALL, LARGE)

_DEGREE = {SMALL: 8, LARGE: 16}
# exponents of (2, p1, p2) in the absolute discriminant
_EXPONENTS = {SMALL: (8, 4, 4), LARGE: (16, 8, 8)}


@dataclass(frozen=True)
class FieldParams:
    label: str
    degree: int
    disc_factored: dict[int, int]
    log_disc: float

    @property
    def discriminant(self) -> int:
        return math.prod(p**e for p, e in self.disc_factored.items())


@dataclass(frozen=True)
class BoundReport:
    x: int
    label: str
    main_term: float
    error_bound: float
    empirical: int

    @property
    def within_bound(self) -> bool:
        return abs(self.empirical - self.main_term) <= self.error_bound


def _check_label(label: str) -> None:
    if label not in LABELS:
        raise InvalidArgumentError(f"unknown field label {label!r}; expected one of {LABELS}")


def field_params(pair: AdmissiblePair, label: str) -> FieldParams:
    _check_label(label)
    e2, e1, e2p = _EXPONENTS[label]
    factored = {2: e2, pair.p1: e1, pair.p2: e2p}
    log_disc = math.fsum(e * math.log(p) for p, e in factored.items())
    return FieldParams(label, _DEGREE[label], factored, log_disc)


def grh_error_bound(x: float, params: FieldParams, class_fraction: float | Fraction) -> float:
    """Right-hand side of the effective Chebotarev inequality under GRH.

    fraction * sqrt(x) * [(1/(2 pi) + 3/log x) log|disc| + (log x/(8 pi) + 1/(4 pi) + 6/log x) n]
    """
    if x < 2:
        raise InvalidArgumentError(f"x must be >= 2, got {x}")
    frac = float(class_fraction)
    if not 0 < frac <= 1:
        raise InvalidArgumentError(f"class fraction must lie in (0, 1], got {class_fraction}")
    lx = math.log(x)
    disc_term = (1 / (2 * math.pi) + 3 / lx) * params.log_disc
    degree_term = (lx / (8 * math.pi) + 1 / (4 * math.pi) + 6 / lx) * params.degree
    return frac * math.sqrt(x) * (disc_term + degree_term)


def split_primes(pair: AdmissiblePair, x: int) -> np.ndarray:
    """Unramified primes below x splitting completely in the degree-8 field."""
    ps = sieve_primes(x).one_mod_four()
    ps = ps[(ps != pair.p1) & (ps != pair.p2)]
    if ps.size == 0:
        return ps
    signs = legendre_block(np.array([pair.p1, pair.p2]), ps)
    return ps[(signs[0] == 1) & (signs[1] == 1)]


def empirical_split_count(pair: AdmissiblePair, x: int, label: str) -> int:
    """Count of primes p < x, unramified in the field, that split completely in it."""
    _check_label(label)
    if x < 2:
        raise InvalidArgumentError(f"x must be >= 2, got {x}")
    split = split_primes(pair, x)
    if label == SMALL:
        return int(split.size)
    return sum(1 for p in split.tolist() if redei_unchecked(pair, p) == 1)


def set_identity_holds(pair: AdmissiblePair, x: int, rho: int) -> bool:
    """Check #S''(x) - #S(x) == rho; raise ConsistencyError when it fails."""
    small = empirical_split_count(pair, x, SMALL)
    large = empirical_split_count(pair, x, LARGE)
    if small - large != rho:
        raise ConsistencyError(
            f"#S''({x}) - #S({x}) = {small} - {large} != rho = {rho} for ({pair.p1}, {pair.p2})"
        )
    return True


def check_bound(pair: AdmissiblePair, x: int, label: str) -> BoundReport:
    """Compare the split count to fraction*li(x) against the GRH error bound.

    A report with ``within_bound`` false is a finding, not an error.
    """
    params = field_params(pair, label)
    frac = Fraction(1, params.degree)
    main = float(frac) * log_integral(x)
    bound = grh_error_bound(x, params, frac)
    return BoundReport(x, label, main, bound, empirical_split_count(pair, x, label))
