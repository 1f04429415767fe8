import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from borromean.arith import (
    is_prime,
    jacobi,
    legendre,
    legendre_block,
    log_integral,
    sieve_primes,
    sqrt_mod,
)
from borromean.errors import InvalidArgumentError, NoSquareRootError


def trial_division_primes(x):
    return [n for n in range(2, x) if all(n % d for d in range(2, math.isqrt(n) + 1))]


def euler(a, p):
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


ODD_PRIMES = trial_division_primes(1000)[1:]


# --- sieve ---


def test_sieve_small():
    assert sieve_primes(3).tolist() == [2]
    assert sieve_primes(2).tolist() == []
    assert sieve_primes(0).tolist() == []


@pytest.mark.parametrize("x", [4, 5, 50, 51, 997, 998, 2000])
def test_sieve_matches_trial_division(x):
    assert sieve_primes(x).tolist() == trial_division_primes(x)


def test_sieve_counts():
    assert len(sieve_primes(50)) == 15
    assert len(sieve_primes(100_000)) == 9592


def test_prime_list_residues_and_pi():
    pl = sieve_primes(1000)
    assert np.all(np.diff(pl.primes) > 0)
    assert set(pl.residue_index.tolist()) == {1, 2, 3}
    assert np.array_equal(pl.residue_index, pl.primes % 4)
    assert pl.pi(100) == 25
    assert pl.pi() == 168
    assert all(p % 4 == 1 for p in pl.one_mod_four().tolist())


def test_prime_list_is_read_only():
    with pytest.raises(ValueError):
        sieve_primes(100).primes[0] = 4


def test_is_prime_against_sieve():
    ps = set(sieve_primes(5000).tolist())
    assert all(is_prime(n) == (n in ps) for n in range(-3, 5000))


# --- Legendre / Jacobi ---


@pytest.mark.parametrize("a, p, expected", [(1, 5, 1), (5, 29, 1), (3, 5, -1), (10, 5, 0), (-1, 13, 1), (-1, 7, -1)])
def test_legendre_examples(a, p, expected):
    assert legendre(a, p) == expected


@pytest.mark.parametrize("p", [2, 1, 0, -3, 10])
def test_legendre_rejects_bad_modulus(p):
    with pytest.raises(InvalidArgumentError):
        legendre(3, p)


def test_legendre_matches_euler_exhaustively():
    for p in ODD_PRIMES:
        for a in range(-p + 1, p):
            assert legendre(a, p) == euler(a % p, p), (a, p)


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.sampled_from(ODD_PRIMES))
def test_legendre_multiplicative(a, b, p):
    assert legendre(a * b, p) == legendre(a, p) * legendre(b, p)


def test_reciprocity_for_one_mod_four():
    ps = [p for p in ODD_PRIMES if p % 4 == 1]
    for p in ps:
        for q in ps:
            if p != q:
                assert legendre(p, q) == legendre(q, p)


@pytest.mark.parametrize("a, m, expected", [(7, 1, 1), (-4, 1, 1), (2, 15, 1), (5, 21, 1), (3, 9, 0)])
def test_jacobi_examples(a, m, expected):
    assert jacobi(a, m) == expected


def test_jacobi_rejects_even():
    with pytest.raises(InvalidArgumentError):
        jacobi(3, 8)


def test_jacobi_multiplicative_in_modulus():
    odds = range(1, 500, 2)
    for m1 in odds[::7]:
        for m2 in odds[::5]:
            if math.gcd(m1, m2) == 1 and m1 * m2 < 500 * 500:
                for a in (-7, 2, 3, 5, 11, 30, 101):
                    assert jacobi(a, m1 * m2) == jacobi(a, m1) * jacobi(a, m2)


def test_jacobi_equals_legendre_on_primes():
    for p in ODD_PRIMES[:60]:
        for a in range(0, 2 * p):
            assert jacobi(a, p) == legendre(a, p)


# --- sqrt_mod ---


def brute_roots(a, p):
    return {s for s in range(p) if s * s % p == a % p}


@pytest.mark.parametrize("a, p", [(1, 13), (5, 29), (13, 17), (2, 7), (10, 13), (3, 73), (5, 41)])
def test_sqrt_mod_examples(a, p):
    s = sqrt_mod(a, p)
    assert 0 <= s < p
    assert s in brute_roots(a, p)
    assert {s, p - s} == brute_roots(a, p)


def test_sqrt_mod_frozen_values():
    assert sqrt_mod(5, 29) in (11, 18)
    assert sqrt_mod(13, 17) in (8, 9)
    assert sqrt_mod(1, 13) in (1, 12)


def test_sqrt_mod_succeeds_iff_residue():
    for p in ODD_PRIMES[:80]:
        for a in range(p):
            if legendre(a, p) == 1:
                s = sqrt_mod(a, p)
                assert s * s % p == a
            else:
                with pytest.raises(NoSquareRootError):
                    sqrt_mod(a, p)


def test_sqrt_mod_deterministic():
    assert sqrt_mod(5, 29) == sqrt_mod(5, 29)


def test_sqrt_mod_large_two_adic_prime():
    p = 998244353  # p - 1 = 119 * 2^23
    for a in (3, 5, 12345, 10**8 + 7):
        if legendre(a, p) == 1:
            s = sqrt_mod(a, p)
            assert s * s % p == a


# --- log_integral ---


def li_oracle(x):
    return float(mpmath.quad(lambda u: 1 / mpmath.log(u), [2, 4, x]))


def test_log_integral_at_two():
    assert log_integral(2) == 0.0


@pytest.mark.parametrize("x, approx", [(10, 5.12044), (1e6, 78626.5)])
def test_log_integral_examples(x, approx):
    assert log_integral(x) == pytest.approx(approx, abs=1e-5 * max(1, approx) if x > 100 else 1e-5)


@pytest.mark.parametrize("x", [2.5, 3, 4, 10, 100, 1234.5, 1e4, 1e5, 1e6, 1e7, 1e8])
def test_log_integral_relative_error(x):
    ref = li_oracle(x)
    assert abs(log_integral(x) - ref) <= 1e-9 * ref


def test_log_integral_rejects_small():
    with pytest.raises(InvalidArgumentError):
        log_integral(1.5)


def test_log_integral_increasing_and_bracketed():
    xs = np.geomspace(1e3, 1e8, 40)
    vals = [log_integral(x) for x in xs]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    for x, v in zip(xs, vals):
        assert 1 < v / (x / math.log(x)) < 1.3


# --- bulk Legendre table ---


def test_legendre_block_matches_scalar():
    ps = np.array([p for p in ODD_PRIMES if p < 400])
    bases = np.arange(-50, 400)
    table = legendre_block(bases, ps)
    for i, a in enumerate(bases.tolist()):
        for j, p in enumerate(ps.tolist()):
            assert table[i, j] == legendre(a, p)


@settings(max_examples=50)
@given(st.lists(st.sampled_from(ODD_PRIMES), min_size=1, max_size=30), st.lists(st.integers(0, 10**6), min_size=1, max_size=30))
def test_legendre_block_property(moduli, bases):
    table = legendre_block(np.array(bases), np.array(moduli))
    assert table.shape == (len(bases), len(moduli))
    for i, a in enumerate(bases):
        for j, p in enumerate(moduli):
            assert table[i, j] == legendre(a, p)
