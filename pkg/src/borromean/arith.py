"""Integer and modular arithmetic shared by the symbol, counting and bound code."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InvalidArgumentError, NoSquareRootError

__all__ = [
    "PrimeList",
    "sieve_primes",
    "is_prime",
    "legendre",
    "jacobi",
    "sqrt_mod",
    "log_integral",
    "legendre_block",
]


@dataclass(frozen=True)
class PrimeList:
    """All primes strictly below ``cutoff``, with their residues mod 4."""

    cutoff: int
    primes: np.ndarray = field(repr=False)
    residue_index: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return int(self.primes.size)

    def pi(self, x: int | None = None) -> int:
        """Number of listed primes below ``x`` (defaults to the cutoff)."""
        if x is None:
            return len(self)
        return int(np.searchsorted(self.primes, x, side="left"))

    def one_mod_four(self) -> np.ndarray:
        return self.primes[self.residue_index == 1]

    def tolist(self) -> list[int]:
        return self.primes.tolist()


def sieve_primes(x: int) -> PrimeList:
    """Sieve of Eratosthenes over [0, x). Returns an empty list for x < 2."""
    x = int(x)
    if x <= 2:
        empty = np.zeros(0, dtype=np.int64)
        return _freeze(PrimeList(max(x, 0), empty, empty.copy()))
    return _sieve_cached(x)


@lru_cache(maxsize=16)
def _sieve_cached(x: int) -> PrimeList:
    flags = np.ones(x, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(x - 1) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    primes = np.flatnonzero(flags).astype(np.int64)
    return _freeze(PrimeList(x, primes, primes % 4))


def _freeze(pl: PrimeList) -> PrimeList:
    pl.primes.setflags(write=False)
    pl.residue_index.setflags(write=False)
    return pl


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        y = pow(a, d, n)
        if y == 1 or y == n - 1:
            continue
        for _ in range(s - 1):
            y = y * y % n
            if y == n - 1:
                break
        else:
            return False
    return True


def _jacobi(a: int, m: int) -> int:
    # binary reciprocity reduction; m odd and positive
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def jacobi(a: int, m: int) -> int:
    """Jacobi symbol (a/m) for odd m >= 1."""
    if m < 1 or m % 2 == 0:
        raise InvalidArgumentError(f"jacobi modulus must be odd and positive, got {m}")
    return _jacobi(a, m)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, via quadratic reciprocity.

    Primality of ``p`` is the caller's responsibility; only parity and size
    are checked.
    """
    if p < 3 or p % 2 == 0:
        raise InvalidArgumentError(f"legendre modulus must be an odd prime, got {p}")
    return _jacobi(a, p)


def sqrt_mod(a: int, p: int) -> int:
    """Tonelli-Shanks square root of ``a`` modulo the odd prime ``p``.

    The non-residue is the smallest one, found by increasing search, so the
    returned root is deterministic. The other root is ``p - s``.
    """
    if p < 3 or p % 2 == 0:
        raise InvalidArgumentError(f"sqrt_mod modulus must be an odd prime, got {p}")
    a %= p
    if a == 0 or _jacobi(a, p) != 1:
        raise NoSquareRootError(f"{a} is not a nonzero square modulo {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)

    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while _jacobi(z, p) != -1:
        z += 1

    m = s
    c = pow(z, q, p)
    t = pow(a, q, p)
    r = pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m = i
        c = b * b % p
        t = t * c % p
        r = r * b % p
    return r


def _simpson_adaptive(f, a: float, b: float, eps: float) -> float:
    fa, fm, fb = f(a), f((a + b) / 2), f(b)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, eps)]
    total = 0.0
    while stack:
        a, b, fa, fm, fb, whole, eps = stack.pop()
        m = (a + b) / 2
        lm, rm = (a + m) / 2, (m + b) / 2
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6 * (fa + 4 * flm + fm)
        right = (b - m) / 6 * (fm + 4 * frm + fb)
        delta = left + right - whole
        if abs(delta) <= 15 * eps or b - a < 1e-12:
            total += left + right + delta / 15
        else:
            stack.append((a, m, fa, flm, fm, left, eps / 2))
            stack.append((m, b, fm, frm, fb, right, eps / 2))
    return total


def log_integral(x: float, rel_tol: float = 1e-9) -> float:
    """Offset logarithmic integral: the integral of 1/log(u) from 2 to x."""
    if x < 2:
        raise InvalidArgumentError(f"log_integral needs x >= 2, got {x}")
    if x == 2:
        return 0.0
    inv_log = lambda u: 1.0 / math.log(u)  # noqa: E731
    # [2, 4] on its own, then doubling pieces so each piece is nearly linear
    edges = [2.0]
    edge = 4.0
    while edge < x:
        edges.append(edge)
        edge *= 2
    edges.append(float(x))

    total = 0.0
    for lo, hi in zip(edges, edges[1:]):
        rough = (hi - lo) * inv_log((lo + hi) / 2)
        total += _simpson_adaptive(inv_log, lo, hi, rel_tol * 0.01 * rough)
    return total


def legendre_block(bases: np.ndarray, moduli: np.ndarray) -> np.ndarray:
    """Matrix of Legendre symbols (bases[i] / moduli[j]) by Euler's criterion.

    Vectorized square-and-multiply in int64; moduli must be odd primes below
    about 3e9 so that products stay within 63 bits. Returns int8 in {-1, 0, 1}.
    """
    bases = np.asarray(bases, dtype=np.int64)
    moduli = np.asarray(moduli, dtype=np.int64)
    out = np.empty((bases.size, moduli.size), dtype=np.int8)
    if out.size == 0:
        return out
    step = max(1, (1 << 22) // max(bases.size, 1))
    for lo in range(0, moduli.size, step):
        m = moduli[lo : lo + step][None, :]
        base = bases[:, None] % m
        exp = (m - 1) // 2
        acc = np.ones_like(base)
        while np.any(exp):
            odd = (exp & 1).astype(bool)
            acc = np.where(odd, acc * base % m, acc)
            base = base * base % m
            exp = exp >> 1
        block = np.where(acc == m - 1, -1, acc)
        out[:, lo : lo + step] = block.astype(np.int8)
    return out
