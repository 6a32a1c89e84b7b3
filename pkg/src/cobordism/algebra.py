"""Sparse trigraded polynomials over F2 in the generators h0, h_i, u_j, c_n.

A monomial is a sorted tuple of ``(code, exponent)`` pairs, where ``code`` is
the integer key of a generator.  A polynomial is a frozenset of monomials;
addition is symmetric difference.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Mapping, NamedTuple, Optional, Tuple

H0_CODE = 0
U_BASE = 100
H_BASE = 200
C_BASE = 1000

_KINDS = {"h0": 0, "u": 1, "h": 2, "c": 3}


class TriDegree(NamedTuple):
    q: int
    s: int
    t: int

    def __add__(self, other):
        return TriDegree(self.q + other.q, self.s + other.s, self.t + other.t)

    def scale(self, e):
        return TriDegree(self.q * e, self.s * e, self.t * e)


ZERO_DEGREE = TriDegree(0, 0, 0)


class AlgebraError(ValueError):
    pass


class ParseError(AlgebraError):
    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


def is_power_of_two(n):
    return n > 0 and n & (n - 1) == 0


def valid_c_index(n):
    """c_n exists for n >= 2 with n + 1 not a power of two."""
    return n >= 2 and not is_power_of_two(n + 1)


@dataclass(frozen=True, order=False)
class GeneratorId:
    kind: str  # 'h0', 'h', 'u' or 'c'
    index: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise AlgebraError(f"unknown generator kind {self.kind!r}")
        if self.kind == "h0" and self.index != 0:
            raise AlgebraError("h0 carries no index")
        if self.kind in ("h", "u") and self.index < 1:
            raise AlgebraError(f"{self.kind} index must be >= 1")
        if self.kind == "c" and not valid_c_index(self.index):
            raise AlgebraError(f"invalid c index {self.index}")

    @property
    def code(self):
        if self.kind == "h0":
            return H0_CODE
        if self.kind == "u":
            return U_BASE + self.index
        if self.kind == "h":
            return H_BASE + self.index
        return C_BASE + self.index

    @staticmethod
    def from_code(code):
        if code == H0_CODE:
            return H0
        if code < H_BASE:
            return GeneratorId("u", code - U_BASE)
        if code < C_BASE:
            return GeneratorId("h", code - H_BASE)
        return GeneratorId("c", code - C_BASE)

    @property
    def degree(self):
        return code_degree(self.code)

    def __lt__(self, other):
        return self.code < other.code

    def __str__(self):
        return code_name(self.code)


H0 = GeneratorId("h0")


def h(i):
    return GeneratorId("h0") if i == 0 else GeneratorId("h", i)


def u(j):
    return GeneratorId("u", j)


def c(n):
    return GeneratorId("c", n)


@lru_cache(maxsize=None)
def code_degree(code):
    if code == H0_CODE:
        return TriDegree(2, 0, 0)
    if code < H_BASE:
        return TriDegree(0, 1, 2 * (2 ** (code - U_BASE) - 1))
    if code < C_BASE:
        return TriDegree(1, 0, 2 * (2 ** (code - H_BASE) - 1))
    return TriDegree(0, 0, 4 * (code - C_BASE))


def code_name(code):
    if code == H0_CODE:
        return "h0"
    if code < H_BASE:
        return f"u{code - U_BASE}"
    if code < C_BASE:
        return f"h{code - H_BASE}"
    return f"c{code - C_BASE}"


# ---------------------------------------------------------------- aliases

def resolve_alias(indices):
    """Index n of the generator written c_{i1,...,iq}.

    ``(1, i)`` names c_{2^(i-1)}; a strictly increasing tuple with entries
    >= 2 names c_{2m-1} with m the sum of 2^(i-2).
    """
    indices = tuple(indices)
    if len(indices) == 2 and indices[0] == 1:
        i = indices[1]
        if i < 2:
            raise AlgebraError(f"c{{1,{i}}} does not name a generator")
        return 2 ** (i - 1)
    if not indices or any(b <= a for a, b in zip(indices, indices[1:])):
        raise AlgebraError(f"alias indices must increase strictly: {indices}")
    if indices[0] < 2:
        raise AlgebraError(f"alias indices must be >= 2: {indices}")
    m = sum(2 ** (i - 2) for i in indices)
    n = 2 * m - 1
    if not valid_c_index(n):
        raise AlgebraError(f"c{{{','.join(map(str, indices))}}} = c{n} is not a generator")
    return n


def canonical_name(n):
    """Alias subscripts of c_n, or None when c_n has no alias form."""
    if not valid_c_index(n):
        raise AlgebraError(f"invalid c index {n}")
    if is_power_of_two(n):
        return (1, n.bit_length())
    if n % 2 == 1:
        m = (n + 1) // 2
        return tuple(i + 2 for i in range(m.bit_length()) if m >> i & 1)
    return None


# ---------------------------------------------------------------- monomials

class Monomial(tuple):
    """Sorted tuple of (generator code, exponent) pairs."""

    __slots__ = ()

    @staticmethod
    def from_exponents(exps: Mapping) -> "Monomial":
        pairs = []
        for g, e in exps.items():
            code = g.code if isinstance(g, GeneratorId) else int(g)
            if e < 0:
                raise AlgebraError("negative exponent")
            if e:
                pairs.append((code, e))
        return Monomial(sorted(pairs))

    @property
    def degree(self):
        return monomial_degree(self)

    @property
    def exponents(self) -> Dict[GeneratorId, int]:
        return {GeneratorId.from_code(code): e for code, e in self}

    def total_degree(self):
        return sum(e for _, e in self)

    def __mul__(self, other):
        return mono_mul(self, other)

    def __str__(self):
        return render_monomial(self)


ONE = Monomial()


@lru_cache(maxsize=1 << 20)
def monomial_degree(mono):
    q = s = t = 0
    for code, e in mono:
        d = code_degree(code)
        q += d.q * e
        s += d.s * e
        t += d.t * e
    return TriDegree(q, s, t)


def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for code, e in b:
        merged[code] = merged.get(code, 0) + e
    return Monomial(sorted(merged.items()))


def gen_monomial(g, e=1):
    return Monomial(((g.code, e),)) if e else ONE


def mono_sort_key(mono):
    """Graded-lex key: lower total degree first, then larger exponent of
    the earlier generator first."""
    flat = []
    for code, e in mono:
        flat.append(code)
        flat.append(-e)
    flat.append(C_BASE * 10)
    return (mono.total_degree(), tuple(flat))


def render_monomial(mono):
    if not mono:
        return "1"
    parts = []
    for code, e in mono:
        name = code_name(code)
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


# ---------------------------------------------------------------- polynomials

class PolyF2:
    """An element of the F2 polynomial algebra; immutable."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable = ()):
        if isinstance(terms, frozenset):
            self.terms = terms
        else:
            acc = set()
            for m in terms:
                m = m if isinstance(m, Monomial) else Monomial(m)
                acc ^= {m}
            self.terms = frozenset(acc)
        self._hash = None

    @staticmethod
    def gen(g, e=1):
        return PolyF2(frozenset((gen_monomial(g, e),)))

    @staticmethod
    def monomial(m):
        return PolyF2(frozenset((m,)))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.sorted_terms())

    def __eq__(self, other):
        if isinstance(other, int) and other in (0, 1):
            other = ZERO if other == 0 else ONE_POLY
        if not isinstance(other, PolyF2):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __add__(self, other):
        if isinstance(other, int):
            other = ONE_POLY if other % 2 else ZERO
        return PolyF2(self.terms ^ other.terms)

    __radd__ = __add__
    __sub__ = __add__

    def __mul__(self, other):
        if isinstance(other, int):
            return self if other % 2 else ZERO
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise AlgebraError("negative power")
        result = ONE_POLY
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base.square()
        return result

    def square(self):
        # Frobenius: cross terms cancel in characteristic two
        return PolyF2(frozenset(Monomial((c, 2 * e) for c, e in m) for m in self.terms))

    def sorted_terms(self):
        return sorted(self.terms, key=mono_sort_key)

    def degrees(self):
        return {m.degree for m in self.terms}

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> Optional[TriDegree]:
        """The common tridegree; None for 0.  Raises if inhomogeneous."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise AlgebraError(f"inhomogeneous polynomial: {self}")
        return next(iter(degs))

    def generators(self):
        return {GeneratorId.from_code(code) for m in self.terms for code, _ in m}

    def __str__(self):
        return render_poly(self)

    def __repr__(self):
        return f"PolyF2({render_poly(self)!r})"


ZERO = PolyF2(frozenset())
ONE_POLY = PolyF2(frozenset((ONE,)))


def poly_add(a, b):
    return PolyF2(a.terms ^ b.terms)


def poly_mul(a, b):
    if not a.terms or not b.terms:
        return ZERO
    acc = set()
    for x in a.terms:
        for y in b.terms:
            acc ^= {mono_mul(x, y)}
    return PolyF2(frozenset(acc))


def poly_sum(polys):
    acc = set()
    for p in polys:
        acc ^= p.terms
    return PolyF2(frozenset(acc))


def render_poly(p):
    if not p.terms:
        return "0"
    return " + ".join(render_monomial(m) for m in p.sorted_terms())


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|(phi|h|u|c)|(.))")


class _Parser:
    """Recursive descent over the polynomial grammar.

    Beyond the core grammar this accepts the constant ``1``, parentheses
    and named symbols supplied by the caller (e.g. ``phi3``).
    """

    def __init__(self, text, symbols=None):
        self.text = text
        self.symbols = symbols or {}
        self.tokens = []
        for m in _TOKEN.finditer(text):
            if m.group(1) is not None:
                self.tokens.append(("int", int(m.group(1)), m.start(1)))
            elif m.group(2) is not None:
                self.tokens.append(("name", m.group(2), m.start(2)))
            elif m.group(3) is not None and not m.group(3).isspace():
                self.tokens.append(("sym", m.group(3), m.start(3)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.take()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse(self):
        p = self.poly()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return p

    def poly(self):
        acc = self.term()
        while self.peek()[:2] == ("sym", "+"):
            self.take()
            acc = acc + self.term()
        return acc

    def term(self):
        acc = self.factor()
        while True:
            tok = self.peek()
            if tok[:2] == ("sym", "*"):
                self.take()
                acc = acc * self.factor()
            elif tok[0] == "name" or tok[:2] == ("sym", "("):
                # juxtaposition, as in u3(c10 + c5^2)
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        base = self.atom()
        if self.peek()[:2] == ("sym", "^"):
            self.take()
            base = base ** self.expect("int")[1]
        return base

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            if val in (0, 1):
                return ONE_POLY if val else ZERO
            raise ParseError(f"unexpected integer {val}", pos)
        if kind == "sym" and val == "(":
            p = self.poly()
            self.expect("sym", ")")
            return p
        if kind != "name":
            raise ParseError(f"unexpected {val!r}", pos)
        if val == "phi":
            idx = self.expect("int")[1]
            key = f"phi{idx}"
            if key not in self.symbols:
                raise ParseError(f"unknown symbol {key}", pos)
            return self.symbols[key]
        if val == "c" and self.peek()[:2] == ("sym", "{"):
            self.take()
            idx = [self.expect("int")[1]]
            while self.peek()[:2] == ("sym", ","):
                self.take()
                idx.append(self.expect("int")[1])
            self.expect("sym", "}")
            try:
                return PolyF2.gen(c(resolve_alias(idx)))
            except AlgebraError as exc:
                raise ParseError(str(exc), pos) from None
        tok = self.peek()
        if tok[0] != "int":
            raise ParseError(f"generator {val!r} needs an index", pos)
        idx = self.take()[1]
        try:
            if val == "h":
                return PolyF2.gen(h(idx))
            if val == "u":
                return PolyF2.gen(u(idx))
            return PolyF2.gen(c(idx))
        except AlgebraError as exc:
            raise ParseError(str(exc), pos) from None


def parse_poly(text, symbols=None):
    """Parse a polynomial; raises ParseError with the offending position."""
    return _Parser(text, symbols).parse()


P = parse_poly
