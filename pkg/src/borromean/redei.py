"""Redei's ternary form, normalized solutions and the Redei triple symbol.

For distinct primes p1, p2 = 1 (mod 4) with (p2/p1) = 1 the form
X^2 - p1 Y^2 - p2 Z^2 has primitive solutions (x0, y0, z0) with y0 even and
x0 - y0 = 1 (mod 4). With alpha = x0 + y0 sqrt(p1), the symbol [p1, p2, p3]
is +1 exactly when p3 splits completely in Q(sqrt(p1), sqrt(p2), sqrt(alpha)).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .arith import _jacobi, is_prime, sieve_primes, sqrt_mod
from .errors import (
    ConsistencyError,
    InadmissiblePairError,
    InadmissibleThirdPrimeError,
    InvalidArgumentError,
    NormalizationExhaustedError,
    OracleInapplicableError,
)

__all__ = [
    "TernarySolution",
    "AdmissiblePair",
    "TripleVerdict",
    "box_solutions",
    "solve_ternary",
    "normalize_solution",
    "normalized_solutions",
    "admissible_pair",
    "oracle_pair",
    "pair_from_solution",
    "redei_symbol",
    "splitting_oracle",
    "quartic_root_count",
    "classify_triple",
    "oracle_check",
]

# direction radius for the line search in normalize_solution
LINE_SEARCH_RADIUS = 4


@dataclass(frozen=True)
class TernarySolution:
    x: int
    y: int
    z: int

    def residual(self, p1: int, p2: int) -> int:
        return self.x * self.x - p1 * self.y * self.y - p2 * self.z * self.z

    def is_normalized(self) -> bool:
        return self.y % 2 == 0 and (self.x - self.y) % 4 == 1

    def __str__(self) -> str:
        return f"x={self.x} y={self.y} z={self.z}"


@dataclass(frozen=True)
class AdmissiblePair:
    p1: int
    p2: int
    sol: TernarySolution

    @property
    def alpha_norm(self) -> int:
        """Norm of x0 + y0 sqrt(p1), which equals p2 * z0^2."""
        return self.sol.x**2 - self.p1 * self.sol.y**2


@dataclass(frozen=True)
class TripleVerdict:
    p1: int
    p2: int
    p3: int
    congruence_ok: tuple[bool, bool, bool]
    legendre_ok: bool
    redei: int | None
    borromean: bool


def _check_pair(p1: int, p2: int) -> None:
    if p1 == p2:
        raise InadmissiblePairError(f"primes not distinct: p1 = p2 = {p1}")
    for name, p in (("p1", p1), ("p2", p2)):
        if not is_prime(p):
            raise InadmissiblePairError(f"{name} = {p} is not prime")
        if p % 4 != 1:
            raise InadmissiblePairError(f"{name} = {p} is not 1 mod 4")
    if _jacobi(p2, p1) != 1:
        raise InadmissiblePairError(f"legendre({p2},{p1}) = -1")


def box_solutions(p1: int, p2: int, scale: int = 1) -> Iterator[TernarySolution]:
    """Primitive solutions with 1 <= z <= scale*ceil(sqrt(p1)), 1 <= y <= scale*ceil(sqrt(p2)).

    Yields (x, y, z) with all entries positive, ordered by z and then y.
    """
    z_max = scale * (math.isqrt(p1 - 1) + 1)
    y_max = scale * (math.isqrt(p2 - 1) + 1)
    for z in range(1, z_max + 1):
        base = p2 * z * z
        for y in range(1, y_max + 1):
            s = base + p1 * y * y
            x = math.isqrt(s)
            if x * x == s and math.gcd(math.gcd(x, y), z) == 1:
                yield TernarySolution(x, y, z)


def solve_ternary(p1: int, p2: int) -> TernarySolution:
    """A primitive positive solution from the Holzer box, preferring y even."""
    _check_pair(p1, p2)
    first = None
    for sol in box_solutions(p1, p2):
        if sol.y % 2 == 0:
            return sol
        if first is None:
            first = sol
    if first is None:
        raise ConsistencyError(f"no solution in the Holzer box for ({p1}, {p2})")
    return first


def _fix_signs(x: int, y: int, z: int) -> TernarySolution:
    # y even and x odd: exactly one of +x, -x has x - y = 1 (mod 4)
    y, z = abs(y), abs(z)
    x = abs(x)
    if (x - y) % 4 != 1:
        x = -x
    return TernarySolution(x, y, z)


def _line_points(sol: TernarySolution, p1: int, p2: int, radius: int) -> Iterator[TernarySolution]:
    """Second intersections of the conic with lines through ``sol``.

    For a direction d with Q(d) != 0, the point Q(d)*P - 2*B(P, d)*d lies on
    the conic again (B is the bilinear form of Q). Points are made primitive.
    """
    x, y, z = sol.x, sol.y, sol.z
    for r in range(1, radius + 1):
        for a, b, c in itertools.product(range(-r, r + 1), repeat=3):
            if max(abs(a), abs(b), abs(c)) != r:
                continue
            q = a * a - p1 * b * b - p2 * c * c
            if q == 0:
                continue
            bil = x * a - p1 * y * b - p2 * z * c
            nx, ny, nz = q * x - 2 * bil * a, q * y - 2 * bil * b, q * z - 2 * bil * c
            g = math.gcd(math.gcd(nx, ny), nz)
            if g == 0:
                continue
            nx, ny, nz = nx // g, ny // g, nz // g
            if nx and ny and nz:
                yield TernarySolution(nx, ny, nz)


def normalize_solution(
    sol: TernarySolution, p1: int, p2: int, radius: int = LINE_SEARCH_RADIUS
) -> TernarySolution:
    """Return a primitive solution with y even and x - y = 1 (mod 4).

    A solution with y even only needs its signs fixed. Otherwise the conic is
    searched along lines through ``sol`` for a point with y even.
    """
    if sol.residual(p1, p2) != 0:
        raise InvalidArgumentError(f"{sol} does not solve the form for ({p1}, {p2})")
    if math.gcd(math.gcd(sol.x, sol.y), sol.z) != 1 or 0 in (sol.x, sol.y, sol.z):
        raise InvalidArgumentError(f"{sol} is not a primitive nontrivial solution")
    if sol.y % 2 == 0:
        return _fix_signs(sol.x, sol.y, sol.z)
    for cand in _line_points(sol, p1, p2, radius):
        if cand.y % 2 == 0:
            return _fix_signs(cand.x, cand.y, cand.z)
    raise NormalizationExhaustedError(
        f"no solution with y even found within direction radius {radius} for ({p1}, {p2})"
    )


def normalized_solutions(p1: int, p2: int, scale: int = 1) -> list[TernarySolution]:
    """All distinct normalized solutions whose (y, z) lie in the scaled box."""
    _check_pair(p1, p2)
    return [_fix_signs(s.x, s.y, s.z) for s in box_solutions(p1, p2, scale) if s.y % 2 == 0]


def _solution_avoiding(p1: int, p2: int, p3: int, avoid_y: bool = False) -> TernarySolution:
    """A normalized solution with p3 not dividing z (and not y, if asked)."""

    def ok(sol: TernarySolution) -> bool:
        return sol.y % 2 == 0 and sol.z % p3 != 0 and not (avoid_y and sol.y % p3 == 0)

    for scale in (1, 4):
        for sol in box_solutions(p1, p2, scale):
            if ok(sol):
                return _fix_signs(sol.x, sol.y, sol.z)
    seed = solve_ternary(p1, p2)
    for cand in _line_points(seed, p1, p2, 2 * LINE_SEARCH_RADIUS):
        if ok(cand):
            return _fix_signs(cand.x, cand.y, cand.z)
    raise NormalizationExhaustedError(
        f"no normalized solution for ({p1}, {p2}) with {p3} not dividing z"
    )


@lru_cache(maxsize=1 << 16)
def _admissible_pair(p1: int, p2: int, avoid: int) -> AdmissiblePair:
    _check_pair(p1, p2)
    if avoid:
        sol = _solution_avoiding(p1, p2, avoid)
    else:
        sol = normalize_solution(solve_ternary(p1, p2), p1, p2)
    if sol.residual(p1, p2) != 0 or not sol.is_normalized():
        raise ConsistencyError(f"bad normalized solution {sol} for ({p1}, {p2})")
    return AdmissiblePair(p1, p2, sol)


def admissible_pair(p1: int, p2: int, avoid: int | None = None) -> AdmissiblePair:
    """Validate (p1, p2) and attach a normalized solution (memoized).

    With ``avoid`` set, the solution is chosen with ``avoid`` not dividing z0.
    """
    return _admissible_pair(int(p1), int(p2), int(avoid or 0))


@lru_cache(maxsize=1 << 12)
def oracle_pair(p1: int, p2: int, p3: int) -> AdmissiblePair:
    """A pair whose solution keeps p3 off the quartic's discriminant (p3 divides neither y0 nor z0)."""
    _check_pair(p1, p2)
    return AdmissiblePair(p1, p2, _solution_avoiding(p1, p2, p3, avoid_y=True))


def pair_from_solution(p1: int, p2: int, sol: TernarySolution) -> AdmissiblePair:
    """Build an AdmissiblePair around a caller-chosen normalized solution."""
    _check_pair(p1, p2)
    if sol.residual(p1, p2) != 0 or not sol.is_normalized():
        raise InvalidArgumentError(f"{sol} is not a normalized solution for ({p1}, {p2})")
    if math.gcd(math.gcd(sol.x, sol.y), sol.z) != 1 or 0 in (sol.x, sol.y, sol.z):
        raise InvalidArgumentError(f"{sol} is not a primitive nontrivial solution")
    return AdmissiblePair(p1, p2, sol)


def _check_third(pair: AdmissiblePair, p3: int) -> None:
    if p3 in (pair.p1, pair.p2):
        raise InadmissibleThirdPrimeError(f"p3 = {p3} coincides with p1 or p2")
    if not is_prime(p3):
        raise InadmissibleThirdPrimeError(f"p3 = {p3} is not prime")
    if p3 % 4 != 1:
        raise InadmissibleThirdPrimeError(f"p3 = {p3} is not 1 mod 4")
    for p in (pair.p1, pair.p2):
        if _jacobi(p, p3) != 1:
            raise InadmissibleThirdPrimeError(f"legendre({p},{p3}) = -1")


def symbol_kernel(p1: int, x0: int, y0: int, p3: int) -> int:
    """Legendre symbol of x0 + y0*sqrt(p1) at a prime of Q(sqrt(p1)) above p3.

    Assumes p3 splits in Q(sqrt(p1)) and p3 does not divide the norm of the
    element. Both conjugates are evaluated and must agree.
    """
    s = sqrt_mod(p1, p3)
    a = (x0 + y0 * s) % p3
    b = (x0 - y0 * s) % p3
    la, lb = _jacobi(a, p3), _jacobi(b, p3)
    if la != lb or la == 0:
        raise ConsistencyError(
            f"conjugate symbols disagree for p1={p1}, x0={x0}, y0={y0}, p3={p3}: {la} vs {lb}"
        )
    return la


def redei_unchecked(pair: AdmissiblePair, p3: int) -> int:
    """Redei symbol without admissibility checks; for the counting loops."""
    if pair.sol.z % p3 == 0:
        pair = admissible_pair(pair.p1, pair.p2, avoid=p3)
    return symbol_kernel(pair.p1, pair.sol.x, pair.sol.y, p3)


def redei_symbol(pair: AdmissiblePair, p3: int) -> int:
    """The Redei symbol [p1, p2, p3] in {+1, -1}."""
    _check_third(pair, p3)
    return redei_unchecked(pair, p3)


def quartic_root_count(pair: AdmissiblePair, p3: int) -> int:
    """Number of roots mod p3 of t^4 - 2 x0 t^2 + p2 z0^2, by exhaustive evaluation."""
    x0, z0 = pair.sol.x, pair.sol.z
    c2 = (-2 * x0) % p3
    c0 = (pair.p2 * z0 * z0) % p3
    count = 0
    for t in range(p3):
        t2 = t * t % p3
        if (t2 * t2 + c2 * t2 + c0) % p3 == 0:
            count += 1
    return count


def splitting_oracle(pair: AdmissiblePair, p3: int) -> bool:
    """Whether p3 splits completely in Q(sqrt(p1), sqrt(p2), sqrt(alpha)).

    Decided from the root count of the minimal polynomial of sqrt(alpha), which
    needs p3 prime to its discriminant 2^8 p1^2 p2 y0^4 z0^2; no square roots
    modulo p3 are taken.
    """
    _check_third(pair, p3)
    x0, y0, z0 = pair.sol.x, pair.sol.y, pair.sol.z
    if z0 % p3 == 0 or y0 % p3 == 0:
        raise OracleInapplicableError(
            f"p3 = {p3} divides the discriminant of the quartic for solution {pair.sol}"
        )
    roots = quartic_root_count(pair, p3)
    if roots % 2:
        raise ConsistencyError(f"odd root count {roots} for {pair} mod {p3}")
    return roots == 4 and _jacobi(pair.p2, p3) == 1


def classify_triple(p1: int, p2: int, p3: int) -> TripleVerdict:
    """Full linkage record of an ordered triple of distinct primes."""
    if len({p1, p2, p3}) != 3:
        raise InvalidArgumentError(f"primes not distinct: ({p1}, {p2}, {p3})")
    for p in (p1, p2, p3):
        if not is_prime(p):
            raise InvalidArgumentError(f"{p} is not prime")
    primes = (p1, p2, p3)
    congruence = tuple(p % 4 == 1 for p in primes)
    # (a/2) is undefined; triples containing 2 already fail the congruence
    legendre_ok = 2 not in primes and all(
        _jacobi(a, b) == 1 for a, b in itertools.permutations(primes, 2)
    )
    redei = None
    if all(congruence) and legendre_ok:
        redei = redei_unchecked(admissible_pair(p1, p2), p3)
    return TripleVerdict(
        p1, p2, p3,
        congruence_ok=congruence,
        legendre_ok=legendre_ok,
        redei=redei,
        borromean=redei == -1,
    )


@dataclass(frozen=True)
class OracleCheck:
    checked: int
    degenerate: int
    disagreements: list[tuple[int, int, int]]


def oracle_check(limit: int) -> OracleCheck:
    """Compare redei_symbol with splitting_oracle on every admissible triple below ``limit``.

    Ordered pairs (p1, p2) in both orientations are checked against every
    admissible third prime. When p3 divides y0 or z0 the oracle runs on
    another normalized solution; ``degenerate`` counts those cases.
    """
    ps = [p for p in sieve_primes(limit).tolist() if p % 4 == 1]
    checked = degenerate = 0
    bad = []
    for p1, p2 in itertools.permutations(ps, 2):
        if _jacobi(p2, p1) != 1:
            continue
        pair = admissible_pair(p1, p2)
        for p3 in ps:
            if p3 in (p1, p2) or _jacobi(p1, p3) != 1 or _jacobi(p2, p3) != 1:
                continue
            opair = pair
            if pair.sol.y % p3 == 0 or pair.sol.z % p3 == 0:
                opair = oracle_pair(p1, p2, p3)
                degenerate += 1
            checked += 1
            if (redei_symbol(pair, p3) == 1) != splitting_oracle(opair, p3):
                bad.append((p1, p2, p3))
    return OracleCheck(checked, degenerate, bad)
