from itertools import combinations
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cobordism.binomial import (
    NotApplicable, PhiVector, alpha_bruteforce, binom_exact, binom_mod2, closed_form,
    corollary_closed_form, gamma_bruteforce, mu, s_repeated_phi,
)


def C(n, k):
    return comb(n, k) if 0 <= k <= n else 0


def alpha_oracle(n, m, k):
    """Chain sum over subsets of {1..m-1}, written independently of the engine."""
    total = 0
    for r in range(m):
        for inner in combinations(range(1, m), r):
            chain = (0,) + inner + (m,)
            term = (-1) ** (r + 1)
            for a, b in zip(chain, chain[1:]):
                term *= C(2 * n - (m - a) * k, b - a)
            total += term
    return total


def gamma_oracle(n, m, k):
    total = 0
    for r in range(m - 1):
        for inner in combinations(range(2, m), r):
            chain = (1,) + inner + (m,)
            term = (-1) ** r
            for a, b in zip(chain, chain[1:]):
                term *= C(k * a + 1, b - a)
            total += term
    return total if m > 1 else -1


def test_binomials():
    assert binom_exact(6, 2) == 15
    assert binom_exact(7, 0) == 1
    assert binom_exact(3, 5) == 0
    assert binom_mod2(6, 2) == 1
    assert all(binom_mod2(n, n) == 1 for n in range(40))


@given(st.integers(0, 300), st.integers(0, 300))
def test_lucas_matches_exact(n, k):
    assert binom_mod2(n, k) == binom_exact(n, k) % 2


@pytest.mark.parametrize("n", range(1, 51))
def test_even_top_odd_bottom_vanishes(n):
    # choosing an odd number from an even one is always even
    assert all(binom_mod2(2 * m, 2 * n - 1) == 0 for m in range(1, 51))


def test_mu():
    assert mu(5, 2) == 1
    assert mu(4, 2) == 0
    assert mu(5, 3) == 0


@pytest.mark.parametrize("n", range(2, 21))
def test_alpha_against_subset_oracle(n):
    for m in range(1, 8):
        for k in range(1, 9):
            if m * k % 2 or m * k >= 2 * n - 1:
                continue
            assert alpha_bruteforce(n, m, k) == alpha_oracle(n, m, k)


@pytest.mark.parametrize("n", range(2, 21))
def test_alpha_two_parts_parity(n):
    for k in range(1, n):
        if 2 * k < 2 * n - 1:
            assert alpha_bruteforce(n, 2, k) % 2 == (n - k) % 2
            assert alpha_bruteforce(n, 2, k) == -C(2 * (n - k), 2) + C(2 * n - k, 1) * C(2 * (n - k), 1)


def test_alpha_odd_parts_even_k_vanishes_mod2():
    for n in range(2, 21):
        for s in range(1, 6):
            for q in range(1, 5):
                m, k = 2 * s - 1, 2 * q
                if m * k < 2 * n - 1:
                    assert alpha_bruteforce(n, m, k) % 2 == 0


def test_alpha_9_4_2_fixed_value():
    assert alpha_bruteforce(9, 4, 2) == alpha_oracle(9, 4, 2)


def test_gamma_against_oracle():
    for n in range(1, 25):
        for m in range(1, 12):
            for k in range(1, 20):
                if m * k == 2 * n - 1:
                    assert gamma_bruteforce(n, m, k) == gamma_oracle(n, m, k)


def test_gamma_five_parts():
    for n in range(1, 40):
        for k in range(1, 16):
            if 5 * k == 2 * n - 1:
                assert gamma_bruteforce(n, 5, k) % 2 == C(k + 1, 4) % 2


def test_alpha_domain_errors():
    with pytest.raises(NotApplicable):
        alpha_bruteforce(3, 1, 3)
    with pytest.raises(NotApplicable):
        alpha_bruteforce(3, 5, 1)
    with pytest.raises(NotApplicable):
        gamma_bruteforce(3, 2, 2)


def test_phivector():
    v = PhiVector.single(3) + PhiVector.single(3)
    assert not v
    assert str(PhiVector.single(0)) == "theta1"
    assert PhiVector.single(2, 4) == PhiVector()
    assert PhiVector.single(7).dimensions() == {53}


def test_repeated_examples():
    assert s_repeated_phi(9, 3, 4) == PhiVector.single(3)
    assert s_repeated_phi(6, 2, 5) == PhiVector.single(1)
    assert s_repeated_phi(3, 3, 2) == PhiVector()  # weight 6 >= 2n


def test_closed_form_examples():
    assert corollary_closed_form(1, 9, 2) == (7, 1)
    t, bit = corollary_closed_form(3, 9, 2)
    assert (t, bit) == (5, 1)


def test_closed_form_hypotheses():
    with pytest.raises(NotApplicable):
        corollary_closed_form(2, 3, 3)
    with pytest.raises(NotApplicable):
        corollary_closed_form(13, 9, 2)
    # 3k = 2n - 1 is the hypothesis under which S_{k,k,k} reaches theta1
    assert closed_form(3, 5, 3, printed=False) == (0, (5 - 3) % 2)
    assert PhiVector.single(0, (5 - 3) % 2) == s_repeated_phi(5, 3, 3)


@pytest.mark.parametrize("number", range(1, 13))
def test_closed_forms_match_chain_sums(number):
    parts = number + 1
    checked = 0
    for n in range(1, 21):
        for k in range(1, 9):
            try:
                target, bit = corollary_closed_form(number, n, k)
            except NotApplicable:
                continue
            if target == 0 and parts * k != 2 * n - 1:
                continue
            assert PhiVector.single(target, bit) == s_repeated_phi(n, k, parts), (n, k)
            checked += 1
    assert checked > 0
