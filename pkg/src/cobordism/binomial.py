"""Binomial sums governing S_{k,...,k} on the elements Phi_n.

``alpha(n, m, k)`` is the coefficient of b_k^m in chi(B)^{2n-mk}_{mk} and
``gamma(n, m, k)`` the coefficient of b_k^m in chi(B)^1_{2n-1}; both are
evaluated here as exact signed sums over strictly increasing index chains.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb


class NotApplicable(ValueError):
    """The query lies outside the hypothesis of the formula."""


def binom_exact(n, k):
    if k < 0 or n < 0 or k > n:
        return 0
    return comb(n, k)


def binom_mod2(n, k):
    # Lucas: C(n, k) is odd iff the bits of k are a subset of those of n
    if k < 0 or n < 0 or k > n:
        return 0
    return 1 if k & ~n == 0 else 0


def mu(n, k):
    return 1 if n % 2 == 1 and k % 2 == 0 else 0


def _check_positive(n, m, k):
    if n < 1 or m < 1 or k < 1:
        raise NotApplicable(f"n, m, k must be positive: {(n, m, k)}")


@lru_cache(maxsize=None)
def alpha_bruteforce(n, m, k):
    """Exact alternating chain sum; requires mk even and mk < 2n - 1."""
    _check_positive(n, m, k)
    if m * k == 2 * n - 1:
        raise NotApplicable("mk = 2n - 1 is the gamma case")
    if m * k % 2 or m * k >= 2 * n - 1:
        raise NotApplicable(f"alpha needs mk even and mk < 2n - 1, got n={n} m={m} k={k}")
    return _alpha_chains(n, m, k)


def _alpha_chains(n, m, k):
    # the chain 0 = i_0 < i_1 < ... < i_r < i_{r+1} = m contributes
    # (-1)^(r+1) * prod_j C(2n - (m - i_j) k, i_{j+1} - i_j)
    total = 0

    def walk(prev, sign, prod):
        nonlocal total
        top = 2 * n - (m - prev) * k
        total += -sign * prod * binom_exact(top, m - prev)
        for nxt in range(prev + 1, m):
            f = binom_exact(top, nxt - prev)
            if f:
                walk(nxt, -sign, prod * f)

    walk(0, 1, 1)
    return total


@lru_cache(maxsize=None)
def gamma_bruteforce(n, m, k):
    """Exact chain sum for mk = 2n - 1 (chains start at i_1 = 1)."""
    _check_positive(n, m, k)
    if m * k != 2 * n - 1:
        raise NotApplicable(f"gamma needs mk = 2n - 1, got n={n} m={m} k={k}")
    if m == 1:
        # only the empty chain: -C(1, 1)
        return -1
    total = 0

    def walk(prev, sign, prod):
        nonlocal total
        top = k * prev + 1
        total += sign * prod * binom_exact(top, m - prev)
        for nxt in range(prev + 1, m):
            f = binom_exact(top, nxt - prev)
            if f:
                walk(nxt, -sign, prod * f)

    walk(1, 1, 1)
    return total


class PhiVector:
    """F2 combination of theta1 and the Phi_i; index 0 stands for theta1."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        acc = set()
        for i in terms:
            if i < 0:
                raise ValueError(f"negative Phi index {i}")
            acc ^= {i}
        self.terms = frozenset(acc)

    @staticmethod
    def single(i, coeff=1):
        return PhiVector((i,)) if coeff % 2 else PhiVector()

    def __add__(self, other):
        v = PhiVector()
        v.terms = self.terms ^ other.terms
        return v

    def __eq__(self, other):
        return isinstance(other, PhiVector) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, i):
        return 1 if i in self.terms else 0

    def dimensions(self):
        return {1 if i == 0 else 8 * i - 3 for i in self.terms}

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join("theta1" if i == 0 else f"phi{i}" for i in sorted(self.terms))

    __repr__ = __str__


def s_repeated_coefficient(n, m, k):
    """Integer coefficient of b_k^m in h(Phi_n), from the alpha/gamma sums.

    Returns ``(target, value)`` with target the Phi index (0 for theta1), or
    None when the weight mk is too large for a nonzero value.
    """
    _check_positive(n, m, k)
    mk = m * k
    if mk == 2 * n - 1:
        return 0, gamma_bruteforce(n, m, k)
    if mk % 2 or mk > 2 * n - 1:
        return None
    target = n - mk // 2
    value = alpha_bruteforce(n, m, k)
    if k % 2 == 0:
        # the b_k factor sitting in front of chi contributes the (m-1)-chain;
        # for m = 1 this is the lone b_k term
        value += 1 if m == 1 else alpha_bruteforce(n, m - 1, k)
    return target, value


def s_repeated_phi(n, k, m):
    """S_{k,...,k} (k taken m times) applied to Phi_n, reduced mod 2."""
    res = s_repeated_coefficient(n, m, k)
    if res is None:
        return PhiVector()
    target, value = res
    return PhiVector.single(target, value)


# ---------------------------------------------------------------- closed forms

def _half(x):
    """x / 2 as an integer; the closed forms only halve even quantities."""
    q = Fraction(x, 2)
    if q.denominator != 1:
        raise ArithmeticError(f"{x}/2 is not an integer")
    return int(q)


def _floor_half(x):
    return x // 2


def _cf2(n, k):
    if not n > k:
        raise NotApplicable("needs n > k")
    return n - k, n - k


def _cf4(n, k):
    if not 2 * k < n:
        raise NotApplicable("needs 2k < n")
    return n - 2 * k, binom_exact(2 * (n - 2 * k), 4) + mu(n, k)


def _cf5(n, k):
    if k % 2 == 0 and 5 * k < 2 * n - 1:
        return n - 5 * (k // 2), binom_exact(2 * (n - 2 * k), 4) + n
    if 5 * k == 2 * n - 1:
        return 0, binom_exact(k + 1, 4)
    raise NotApplicable("needs k = 2s with 5k < 2n - 1, or 5k = 2n - 1")


def _cf6(n, k):
    if not 3 * k < n:
        raise NotApplicable("needs 3k < n")
    v = 0
    if mu(n, k):
        v += _half(n + 1)
    if mu(k, n):
        v += _half(n - 2)
    return n - 3 * k, v


def _cf7(n, k):
    if not (k % 2 == 0 and 7 * k < 2 * n - 1):
        raise NotApplicable("needs k = 2s with 7k < 2n - 1")
    return n - 7 * (k // 2), n * _floor_half(n + 1)


def _cf8(n, k):
    if not 4 * k < n:
        raise NotApplicable("needs 4k < n")
    v = mu(n, k) + binom_exact(2 * (n - 4 * k), 8)
    if mu(n + 1, k):
        v += _half(n)
    return n - 4 * k, v


def _cf9(n, k):
    if not (k % 2 == 0 and 9 * k < 2 * n):
        raise NotApplicable("needs k = 2s with 9k < 2n")
    return n - 9 * (k // 2), n + (n + 1) * _floor_half(n) + binom_exact(2 * (n - 4 * k), 8)


def _cf10(n, k):
    if not 5 * k < n:
        raise NotApplicable("needs 5k < n")
    return n - 5 * k, mu(n, k) + (n - k) * binom_exact(2 * (n - 4 * k), 8)


def _cf11(n, k):
    if not (k % 2 == 0 and 11 * (k // 2) < n):
        raise NotApplicable("needs k = 2s with 11s < n")
    return n - 11 * (k // 2), n + n * binom_exact(2 * (n - 4 * k), 8)


def _cf12(n, k):
    if not 6 * k < n:
        raise NotApplicable("needs 6k < n")
    v = Fraction(0)
    if mu(n, k):
        v += Fraction(n * n + 3, 4)
    hn = _floor_half(n)
    v += hn * (hn - k)
    v += Fraction((n - 2 * k) * binom_exact(n - 4 * k + 1, 5), 2)
    if v.denominator != 1:
        raise ArithmeticError(f"non-integral closed form at n={n} k={k}")
    return n - 6 * k, int(v)


def _cf13(n, k):
    if not (k % 2 == 0 and 13 * (k // 2) < n):
        raise NotApplicable("needs k = 2s with 13s < n")
    v = n * ((n * n + 3) // 4) + _floor_half(n)
    half = Fraction(n * binom_exact(n + 1, 5), 2)
    if half.denominator != 1:
        raise ArithmeticError(f"non-integral closed form at n={n} k={k}")
    return n - 13 * (k // 2), v + int(half)


_CLOSED_FORMS = {
    2: _cf2, 4: _cf4, 5: _cf5, 6: _cf6, 7: _cf7, 8: _cf8,
    9: _cf9, 10: _cf10, 11: _cf11, 12: _cf12, 13: _cf13,
}


def closed_form(m, n, k, *, printed=True):
    """Closed-form value of S_{k,...,k} (m parts) on Phi_n, as (target, bit).

    Target 0 means theta1.  For m = 3 the theta1 case is stated under the
    hypothesis 2n + 1 = 3k; with ``printed=False`` it is taken under
    3k = 2n - 1 instead, the only hypothesis under which S_{k,k,k}Phi_n can
    land on theta1.
    """
    if n < 1 or k < 1:
        raise NotApplicable("n and k must be positive")
    if m == 3:
        if k % 2 == 0 and 3 * (k // 2) < n:
            return n - 3 * (k // 2), (n - k) % 2
        if printed and 2 * n + 1 == 3 * k:
            return 0, (n - k) % 2
        if not printed and 3 * k == 2 * n - 1:
            return 0, (n - k) % 2
        raise NotApplicable("needs k = 2s with 3s < n, or the theta1 hypothesis")
    if m not in _CLOSED_FORMS:
        raise NotApplicable(f"no closed form for {m} repeated parts")
    target, value = _CLOSED_FORMS[m](n, k)
    return target, value % 2


def corollary_closed_form(number, n, k, *, printed=True):
    """Closed form numbered 1..12 in order of increasing repetition count,
    so number j covers S_{k,...,k} with j + 1 parts."""
    if not 1 <= number <= 12:
        raise NotApplicable(f"closed forms are numbered 1..12, got {number}")
    return closed_form(number + 1, n, k, printed=printed)
