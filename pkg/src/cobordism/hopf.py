"""B-series arithmetic, the conjugation chi(B) and Kochman's expansion of h(Phi_m).

Monomials in b_1, b_2, ... are stored as partitions: tuples of b-indices in
decreasing order, so b_3 b_1^2 is ``(3, 1, 1)``.  The weight of b_n is n.
"""

from __future__ import annotations

import re
import threading
from collections import Counter
from math import factorial
from typing import Dict, Optional, Tuple

from .binomial import PhiVector


def partitions(w, max_part=None, max_len=None):
    """Partitions of w as decreasing tuples."""
    if max_part is None:
        max_part = w
    if w == 0:
        yield ()
        return
    if max_len == 0:
        return
    for p in range(min(w, max_part), 0, -1):
        for rest in partitions(w - p, p, None if max_len is None else max_len - 1):
            yield (p,) + rest


def _divides(small, big):
    cs, cb = Counter(small), Counter(big)
    return all(cb[k] >= v for k, v in cs.items())


class OpIndex:
    """Exponent vector E = (e_1, ..., e_n); b_E = prod b_i^{e_i}."""

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        self.parts = tuple(sorted((int(p) for p in parts), reverse=True))
        if any(p < 1 for p in self.parts):
            raise ValueError(f"parts must be positive: {parts}")

    @classmethod
    def from_exponents(cls, exps):
        """From a mapping index -> exponent or a sequence (e_1, e_2, ...)."""
        if not hasattr(exps, "items"):
            exps = {i + 1: e for i, e in enumerate(exps)}
        parts = []
        for i, e in exps.items():
            if e < 0:
                raise ValueError("negative exponent")
            parts.extend([i] * e)
        return cls(parts)

    @classmethod
    def parse(cls, text):
        """'2,2,2' (repeated parts) or 'b3^1*b2^4'; '' or '1' is the empty index."""
        text = text.strip()
        if text in ("", "1", "0", "()"):
            return cls()
        if "b" in text:
            parts = []
            for factor in text.split("*"):
                m = re.fullmatch(r"\s*b(\d+)(?:\^(\d+))?\s*", factor)
                if not m:
                    raise ValueError(f"bad b-monomial factor {factor!r}")
                parts.extend([int(m.group(1))] * int(m.group(2) or 1))
            return cls(parts)
        try:
            return cls(int(x) for x in text.split(","))
        except ValueError:
            raise ValueError(f"bad operation index {text!r}") from None

    @property
    def exponents(self) -> Dict[int, int]:
        return dict(Counter(self.parts))

    def exponent_vector(self):
        n = max(self.parts, default=0)
        cnt = Counter(self.parts)
        return tuple(cnt[i] for i in range(1, n + 1))

    @property
    def weight(self):
        return sum(self.parts)

    def is_repeated(self):
        return len(set(self.parts)) == 1 and len(self.parts) >= 2

    def __eq__(self, other):
        return isinstance(other, OpIndex) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __str__(self):
        return ",".join(map(str, self.parts)) if self.parts else "()"

    __repr__ = __str__


class BSeriesPoly:
    """Integer polynomial in b_1, b_2, ...; zero coefficients are dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @staticmethod
    def one():
        return BSeriesPoly({(): 1})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BSeriesPoly(out)

    def __neg__(self):
        return BSeriesPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def mul(self, other, within=None):
        """Product; with ``within`` keep only monomials dividing b_within."""
        out = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                key = tuple(sorted(a + b, reverse=True))
                if within is not None and not _divides(key, within):
                    continue
                out[key] = out.get(key, 0) + x * y
        return BSeriesPoly(out)

    __mul__ = mul

    def coefficient(self, parts):
        return self.terms.get(tuple(sorted(parts, reverse=True)), 0)

    def weights(self):
        return {sum(k) for k in self.terms}

    def __eq__(self, other):
        return isinstance(other, BSeriesPoly) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for key in sorted(self.terms, key=lambda p: (sum(p), p)):
            v = self.terms[key]
            mono = "*".join(f"b{i}" if e == 1 else f"b{i}^{e}"
                            for i, e in sorted(Counter(key).items(), reverse=True))
            if not mono:
                out.append(str(v))
            elif v == 1:
                out.append(mono)
            elif v == -1:
                out.append("-" + mono)
            else:
                out.append(f"{v}*{mono}")
        return " + ".join(out).replace("+ -", "- ")

    __repr__ = __str__


def _multinomial_power(k, parts):
    # coefficient of b_lambda in (1 + b_1 + b_2 + ...)^k
    ell = len(parts)
    if ell > k:
        return 0
    val = factorial(k) // factorial(k - ell)
    for e in Counter(parts).values():
        val //= factorial(e)
    return val


_cache_lock = threading.Lock()
_power_cache: Dict[Tuple, BSeriesPoly] = {}
_chi_cache: Dict[Tuple, BSeriesPoly] = {}


def _within_key(within):
    return None if within is None else tuple(sorted(within, reverse=True))


def b_power_component(k, w, within=None):
    """Weight-w part of B^k with B = 1 + b_1 + b_2 + ..."""
    within = _within_key(within)
    key = (k, w, within)
    with _cache_lock:
        hit = _power_cache.get(key)
    if hit is not None:
        return hit
    if within is None:
        cands = partitions(w, max_len=k)
    else:
        cands = {p for p in _sub_multisets(within) if sum(p) == w and len(p) <= k}
    out = BSeriesPoly({p: _multinomial_power(k, p) for p in cands})
    with _cache_lock:
        _power_cache[key] = out
    return out


def _sub_multisets(parts):
    items = sorted(Counter(parts).items(), reverse=True)

    def rec(i):
        if i == len(items):
            yield ()
            return
        v, e = items[i]
        for rest in rec(i + 1):
            for j in range(e + 1):
                yield (v,) * j + rest

    return [tuple(sorted(p, reverse=True)) for p in rec(0)]


def chi_component(t, w, within=None):
    """chi(B)^t_w: the alternating sum over chains t < q_1 < ... < q_r < t + w
    of -(-1)^r B^{q_r}_{t+w-q_r} ... B^t_{q_1-t}."""
    within = _within_key(within)
    return _chi(t, t + w, within)


def _chi(t, top, within):
    key = (t, top, within)
    with _cache_lock:
        hit = _chi_cache.get(key)
    if hit is not None:
        return hit
    # split off the smallest chain element q_1 = q
    acc = -b_power_component(t, top - t, within)
    for q in range(t + 1, top):
        rest = _chi(q, top, within)
        if rest:
            acc = acc - rest.mul(b_power_component(t, q - t, within), within)
    with _cache_lock:
        _chi_cache[key] = acc
    return acc


def _b(n):
    return BSeriesPoly.one() if n == 0 else BSeriesPoly({(n,): 1})


def kochman_slot(m, i, within=None):
    """Coefficient polynomial of Phi_i in h(Phi_m); i = 0 is the theta1 slot."""
    if not 0 <= i <= m:
        return BSeriesPoly()
    top = 2 * m
    if i == 0:
        acc = BSeriesPoly()
        for k in range(m):
            acc = acc + _b(2 * k).mul(_chi(2 * k + 1, top, within), within)
        return acc
    acc = _b(2 * m - 2 * i)
    if within is not None:
        acc = BSeriesPoly({p: v for p, v in acc.terms.items() if _divides(p, within)})
    for hh in range(m - i):
        acc = acc + _b(2 * hh).mul(_chi(2 * hh + 2 * i, top, within), within)
    return acc


def kochman_h(m, wmax=None):
    """Truncated h(Phi_m) as {b-monomial: {slot: integer}}; slot 0 is theta1."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if wmax is None:
        wmax = 4 * m
    out: Dict[Tuple[int, ...], Dict[int, int]] = {}
    for i in range(m + 1):
        weight = 2 * m - 1 if i == 0 else 2 * m - 2 * i
        if weight > wmax:
            continue
        for mono, v in kochman_slot(m, i).terms.items():
            out.setdefault(mono, {})[i] = v
    return out


def s_on_phi_coefficient(E, m) -> Optional[Tuple[int, int]]:
    """(slot, integer coefficient of b_E in h(Phi_m)), or None if the weight
    of E admits no slot."""
    if not isinstance(E, OpIndex):
        E = OpIndex(E)
    w = E.weight
    if w == 0:
        return m, 1
    if w == 2 * m - 1:
        slot = 0
    elif w % 2 == 0 and w <= 2 * m - 2:
        slot = m - w // 2
    else:
        return None
    return slot, kochman_slot(m, slot, within=E.parts).coefficient(E.parts)


def s_on_phi(E, m):
    """S_E(Phi_m) mod 2."""
    res = s_on_phi_coefficient(E, m)
    if res is None:
        return PhiVector()
    slot, v = res
    return PhiVector.single(slot, v)


def clear_caches():
    with _cache_lock:
        _power_cache.clear()
        _chi_cache.clear()
