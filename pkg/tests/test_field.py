import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from scipy.stats import chisquare

from securegraph.field import MAX_MODULUS, PrimeField, next_prime_at_least, sample_matrix


@pytest.mark.parametrize("n, p", [(2, 2), (8, 11), (10**6, 1000003)])
def test_next_prime_at_least(n, p):
    assert next_prime_at_least(n) == p
    assert sympy.nextprime(n - 1) == p


@given(st.integers(2, 50_000))
def test_next_prime_matches_sympy(n):
    assert next_prime_at_least(n) == sympy.nextprime(n - 1)


def test_field_rejects_bad_moduli():
    for q in (1, 4, 9, 15):
        with pytest.raises(ValueError):
            PrimeField(q)
    with pytest.raises(ValueError, match="MAX_MODULUS"):
        PrimeField(next_prime_at_least(MAX_MODULUS + 1))


@pytest.mark.parametrize("q", [2, 3, 5, 7, 11, 13])
def test_field_axioms_exhaustive(q):
    F = PrimeField(q)
    for a, b, c in itertools.product(range(q), repeat=3):
        assert ((a + b) % q + c) % q == (a + (b + c) % q) % q
        assert (a * (b + c)) % q == (a * b + a * c) % q
    for a in range(1, q):
        assert a * F.inv(a) % q == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_rank_examples():
    assert PrimeField(5).rank(np.eye(3, dtype=np.int64)) == 3
    assert PrimeField(5).rank(np.zeros((3, 4), dtype=np.int64)) == 0
    assert PrimeField(5).rank([[1, 2], [2, 4]]) == 1
    # over q=2 the rows 1,1 / 1,3 coincide
    assert PrimeField(2).rank([[1, 1], [1, 3]]) == 1
    assert PrimeField(5).rank([[1, 1], [1, 3]]) == 2


def _span_rank(F, m):
    """log_q of the number of distinct vectors in the row space."""
    rows = np.asarray(m) % F.q
    span = {tuple(np.mod(np.array(coef) @ rows, F.q))
            for coef in itertools.product(range(F.q), repeat=rows.shape[0])}
    r = 0
    while F.q ** r < len(span):
        r += 1
    assert F.q ** r == len(span)
    return r


small_mats = st.tuples(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(1, 4)).flatmap(
    lambda t: st.tuples(st.just(t[0]), st.lists(
        st.lists(st.integers(0, t[0] - 1), min_size=t[2], max_size=t[2]),
        min_size=t[1], max_size=t[1])))


@given(small_mats)
def test_rank_matches_span_enumeration(qm):
    q, m = qm
    F = PrimeField(q)
    m = np.array(m)
    assert F.rank(m) == _span_rank(F, m)
    assert F.rank(m) == F.rank(m.T)
    assert F.rank(m) == F.rank(m[::-1])


@given(small_mats, st.integers(0, 2**32))
def test_solve_left_multiply_back(qm, seed):
    q, m = qm
    F = PrimeField(q)
    m = np.array(m)
    rng = np.random.default_rng(seed)
    inside = F.matmul(F.sample(2, m.shape[0], rng), m)
    d = F.solve_left(m, inside)
    assert d is not None
    assert np.array_equal(F.matmul(d, m), inside)
    outside = F.sample(1, m.shape[1], rng)
    d = F.solve_left(m, outside)
    in_span = F.rank(np.vstack([m, outside])) == F.rank(m)
    assert (d is not None) == in_span
    if d is not None:
        assert np.array_equal(F.matmul(d, m), outside)


def test_solve_left_identity_and_outside():
    F = PrimeField(7)
    t = np.array([[3, 4, 5]])
    assert np.array_equal(F.solve_left(np.eye(3, dtype=np.int64), t), t)
    assert F.solve_left(np.array([[1, 0, 0]]), np.array([[0, 1, 0]])) is None


def test_inverse_of_random_full_rank():
    F = PrimeField(7)
    rng = np.random.default_rng(3)
    while True:
        m = F.sample(4, 4, rng)
        if F.rank(m) == 4:
            break
    d = F.solve_left(m, F.eye(4))
    assert np.array_equal(F.matmul(d, m), F.eye(4))
    assert np.array_equal(F.matmul(m, d), F.eye(4))
    assert np.array_equal(F.inverse(m), d)


def test_sampling_is_seed_deterministic():
    F = PrimeField(2)
    a = sample_matrix(F, 1, 1, np.random.default_rng(11))
    b = sample_matrix(F, 1, 1, np.random.default_rng(11))
    assert a.shape == (1, 1) and a[0, 0] in (0, 1) and np.array_equal(a, b)
    big = PrimeField(101)
    assert np.array_equal(big.sample(5, 6, np.random.default_rng(4)),
                          big.sample(5, 6, np.random.default_rng(4)))


def test_sampling_uniform_chi_square():
    F = PrimeField(5)
    draws = F.sample(1, 10_000, np.random.default_rng(12345)).ravel()
    counts = np.bincount(draws, minlength=5)
    assert chisquare(counts).pvalue > 0.01
