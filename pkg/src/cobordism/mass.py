"""The E1-term of the modified algebraic spectral sequence as a differential
algebra over F2: the first differential, tridegree cells and their homology,
and the matrix Massey constructions used to name classes in E2.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from . import gf2
from .algebra import (
    C_BASE, H0_CODE, H_BASE, U_BASE, ZERO, ONE_POLY, AlgebraError, GeneratorId,
    Monomial, PolyF2, TriDegree, c, canonical_name, code_degree, gen_monomial, h,
    is_power_of_two, mono_mul, mono_sort_key, poly_sum, resolve_alias, u, valid_c_index,
)

DEFAULT_T_BOUND = 108


class BoundError(ValueError):
    pass


class MasseyError(ValueError):
    pass


class ForbiddenPair(MasseyError):
    """The Massey product of a forbidden pair is not defined."""


# ---------------------------------------------------------------- d1

def alpha(i, j):
    """u_i h_j + u_j h_i."""
    return PolyF2.gen(u(i)) * PolyF2.gen(h(j)) + PolyF2.gen(u(j)) * PolyF2.gen(h(i))


def c_alias(*indices):
    return PolyF2.gen(c(resolve_alias(indices)))


@lru_cache(maxsize=None)
def d1_generator(g: GeneratorId) -> PolyF2:
    if g.kind == "h0" or g.kind == "u":
        return ZERO
    if g.kind == "h":
        return PolyF2.gen(h(0)) * PolyF2.gen(u(g.index))
    n = g.index
    if n % 2 == 0 and not is_power_of_two(n):
        # even non-powers of two are chosen to be cycles
        return ZERO
    idx = canonical_name(n)
    if len(idx) == 2:
        return alpha(*idx)
    # three or more subscripts: pairs s <= t, with c_{1,i_s} and c_{1,i_t}
    # omitted from the product; the diagonal brackets vanish over F2
    acc = []
    for a in range(len(idx)):
        for b in range(a, len(idx)):
            rest = ONE_POLY
            for x in range(len(idx)):
                if x != a and x != b:
                    rest = rest * c_alias(1, idx[x])
            acc.append((PolyF2.gen(u(idx[b])) * PolyF2.gen(h(idx[a]))
                        + PolyF2.gen(u(idx[a])) * PolyF2.gen(h(idx[b]))) * rest)
    return poly_sum(acc)


def d1_code(code):
    return d1_generator(GeneratorId.from_code(code))


_d1_cache: Dict[Monomial, frozenset] = {}
_d1_lock = threading.Lock()


def d1_monomial(mono: Monomial) -> frozenset:
    """d1 of a monomial as a frozenset of monomials (Leibniz, no signs)."""
    hit = _d1_cache.get(mono)
    if hit is not None:
        return hit
    acc = set()
    for pos, (code, e) in enumerate(mono):
        if e % 2 == 0:
            continue  # e * g^(e-1) d1(g) vanishes for even e
        dg = d1_code(code)
        if not dg:
            continue
        rest = list(mono)
        if e == 1:
            del rest[pos]
        else:
            rest[pos] = (code, e - 1)
        rest = Monomial(rest)
        for m in dg.terms:
            acc ^= {mono_mul(rest, m)}
    out = frozenset(acc)
    with _d1_lock:
        _d1_cache[mono] = out
    return out


def d1(p: PolyF2) -> PolyF2:
    acc = set()
    for m in p.terms:
        acc ^= d1_monomial(m)
    return PolyF2(frozenset(acc))


D1_SHIFT = TriDegree(1, 1, 0)


# ---------------------------------------------------------------- cells

def registry(t_bound=DEFAULT_T_BOUND):
    """Generators other than h0 with t-degree at most t_bound, in code order."""
    gens = []
    i = 1
    while 2 * (2 ** i - 1) <= t_bound:
        gens.append(u(i).code)
        i += 1
    i = 1
    while 2 * (2 ** i - 1) <= t_bound:
        gens.append(h(i).code)
        i += 1
    for n in range(2, t_bound // 4 + 1):
        if valid_c_index(n):
            gens.append(c(n).code)
    return gens


@lru_cache(maxsize=4096)
def _cell_basis(q, s, t, t_bound):
    if q < 0 or s < 0 or t < 0:
        return ()
    if t > t_bound:
        raise BoundError(f"t = {t} exceeds the bound {t_bound}")
    gens = [(code, code_degree(code)) for code in registry(t_bound)]
    out = []
    cur: List[Tuple[int, int]] = []

    def rec(i, rq, rs, rt):
        if rt == 0 and rs == 0:
            if rq % 2 == 0:
                pairs = ([(H0_CODE, rq // 2)] if rq else []) + cur
                out.append(Monomial(pairs))
            return
        if i == len(gens):
            return
        code, d = gens[i]
        emax = rt // d.t
        if d.s:
            emax = min(emax, rs // d.s)
        if d.q:
            emax = min(emax, rq // d.q)
        for e in range(emax, 0, -1):
            cur.append((code, e))
            rec(i + 1, rq - e * d.q, rs - e * d.s, rt - e * d.t)
            cur.pop()
        rec(i + 1, rq, rs, rt)

    rec(0, q, s, t)
    return tuple(sorted(out, key=mono_sort_key))


def cell_basis(q, s, t, t_bound=DEFAULT_T_BOUND):
    """All monomials of tridegree (q, s, t), in canonical order."""
    return list(_cell_basis(q, s, t, t_bound))


class Cell:
    """A tridegree cell with its monomial basis.

    Vectors are ints; the basis element at position p is bit n-1-p, so
    that eliminations pivot on the latest monomials and reduced
    representatives favour the earliest ones.
    """

    def __init__(self, q, s, t, t_bound=DEFAULT_T_BOUND):
        self.degree = TriDegree(q, s, t)
        self.t_bound = t_bound
        self.basis = _cell_basis(q, s, t, t_bound)
        n = len(self.basis)
        self.bit = {m: 1 << (n - 1 - p) for p, m in enumerate(self.basis)}

    def __len__(self):
        return len(self.basis)

    def vector(self, p: PolyF2) -> int:
        v = 0
        for m in p.terms:
            try:
                v ^= self.bit[m]
            except KeyError:
                raise AlgebraError(f"{m} does not lie in cell {tuple(self.degree)}") from None
        return v

    def poly(self, v: int) -> PolyF2:
        n = len(self.basis)
        return PolyF2(frozenset(self.basis[n - 1 - b] for b in gf2.bits(v)))

    def d1_rows(self, target: "Cell"):
        """d1 images of the basis elements as vectors in ``target``."""
        rows = []
        for m in self.basis:
            v = 0
            for x in d1_monomial(m):
                v ^= target.bit[x]
            rows.append(v)
        return rows


_cell_cache: Dict[Tuple, Cell] = {}


def get_cell(q, s, t, t_bound=DEFAULT_T_BOUND):
    key = (q, s, t, t_bound)
    cell = _cell_cache.get(key)
    if cell is None:
        cell = Cell(q, s, t, t_bound)
        _cell_cache[key] = cell
    return cell


@dataclass
class Homology:
    degree: TriDegree
    dim_basis: int
    dim_cycles: int
    dim_boundaries: int
    representatives: List[PolyF2] = field(default_factory=list)

    @property
    def dim_homology(self):
        return self.dim_cycles - self.dim_boundaries

    def line(self):
        q, s, t = self.degree
        return (f"CELL {q} {s} {t} | {self.dim_basis} | {self.dim_cycles} | "
                f"{self.dim_boundaries} | {self.dim_homology}")

    def render(self):
        return "\n".join([self.line()] + [str(p) for p in self.representatives])


class _BoundarySpace:
    def __init__(self, q, s, t, t_bound):
        self.cell = get_cell(q, s, t, t_bound)
        self.source = get_cell(q - 1, s - 1, t, t_bound)
        self.basis = gf2.EchelonBasis()
        for i, row in enumerate(self.source.d1_rows(self.cell)):
            self.basis.add(row, 1 << i)


_boundary_cache: Dict[Tuple, _BoundarySpace] = {}


def _boundaries(q, s, t, t_bound):
    key = (q, s, t, t_bound)
    space = _boundary_cache.get(key)
    if space is None:
        space = _BoundarySpace(q, s, t, t_bound)
        _boundary_cache[key] = space
    return space


def homology(q, s, t, t_bound=DEFAULT_T_BOUND, representatives=True) -> Homology:
    cell = get_cell(q, s, t, t_bound)
    target = get_cell(q + 1, s + 1, t, t_bound)
    out_rows = cell.d1_rows(target)
    cycles = gf2.kernel(out_rows)  # as combinations of basis bits (row index)
    n = len(cell)
    # row index i is basis position i, i.e. bit n-1-i in cell vectors
    cycle_vecs = []
    for comb in cycles:
        v = 0
        for i in gf2.bits(comb):
            v |= 1 << (n - 1 - i)
        cycle_vecs.append(v)
    bnd = _boundaries(q, s, t, t_bound)
    reps = []
    if representatives:
        quotient = gf2.EchelonBasis()
        for r in bnd.basis.rows.values():
            quotient.add(r)
        for v in cycle_vecs:
            rem, _ = quotient.reduce(v)
            if rem:
                quotient.add(rem)
                reps.append(cell.poly(rem))
    return Homology(TriDegree(q, s, t), n, len(cycle_vecs), bnd.basis.rank, reps)


def _degree_of(p: PolyF2) -> TriDegree:
    deg = p.degree  # raises on inhomogeneous input
    return deg


def is_cycle(p: PolyF2) -> bool:
    _degree_of(p)
    return not d1(p)


def boundary_preimage(p: PolyF2, t_bound=DEFAULT_T_BOUND) -> Optional[PolyF2]:
    """Some x with d1(x) = p, or None if p is not a boundary."""
    if not p:
        return ZERO
    q, s, t = _degree_of(p)
    if q < 1 or s < 1:
        return None
    bnd = _boundaries(q, s, t, t_bound)
    try:
        v = bnd.cell.vector(p)
    except AlgebraError:
        return None
    tag = bnd.basis.solve(v)
    if tag is None:
        return None
    return PolyF2(frozenset(bnd.source.basis[i] for i in gf2.bits(tag)))


def is_boundary(p: PolyF2, t_bound=DEFAULT_T_BOUND) -> bool:
    return boundary_preimage(p, t_bound) is not None


def d1_solve(target: PolyF2, source_degree: TriDegree, t_bound=DEFAULT_T_BOUND) -> Optional[PolyF2]:
    """The reduced solution x of d1(x) = target in the given source cell.

    Solutions differ by cycles; the one returned has no monomial among the
    pivots of the cycle space, which makes the choice deterministic.
    """
    src = get_cell(*source_degree, t_bound)
    tgt = get_cell(source_degree.q + 1, source_degree.s + 1, source_degree.t, t_bound)
    if not target:
        return ZERO
    try:
        v = tgt.vector(target)
    except AlgebraError:
        return None
    rows = src.d1_rows(tgt)
    image = gf2.EchelonBasis()
    n = len(src)
    for i, r in enumerate(rows):
        image.add(r, 1 << (n - 1 - i))
    tag = image.solve(v)
    if tag is None:
        return None
    cyc = gf2.EchelonBasis()
    for comb in gf2.kernel(rows):
        w = 0
        for i in gf2.bits(comb):
            w |= 1 << (n - 1 - i)
        cyc.add(w)
    rem, _ = cyc.reduce(tag)
    return src.poly(rem)


# ---------------------------------------------------------------- Massey products

def u_decomposition(xi: PolyF2) -> Dict[int, PolyF2]:
    """xi = sum u_j * c~_j for xi of tridegree (0, 1, t); returns {j: c~_j}."""
    out: Dict[int, set] = {}
    for m in xi.terms:
        ucodes = [(code, e) for code, e in m if U_BASE < code < H_BASE]
        others = [code for code, _ in m if code < C_BASE and code not in (ucodes[0][0] if ucodes else -1,)]
        if len(ucodes) != 1 or ucodes[0][1] != 1 or others:
            raise MasseyError(f"{xi} is not linear in the u_j with c-coefficients")
        code = ucodes[0][0]
        rest = Monomial(p for p in m if p[0] != code)
        out.setdefault(code - U_BASE, set()).symmetric_difference_update({rest})
    return {j: PolyF2(frozenset(v)) for j, v in out.items() if v}


def canonical_h(xi: PolyF2) -> PolyF2:
    """h_xi = sum h_j c~_j for xi = sum u_j c~_j."""
    acc = []
    for j, cj in u_decomposition(xi).items():
        acc.append(PolyF2.gen(h(j)) * cj)
    return poly_sum(acc)


def _single_u(p):
    if len(p.terms) == 1:
        (m,) = p.terms
        if len(m) == 1 and U_BASE < m[0][0] < H_BASE and m[0][1] == 1:
            return m[0][0] - U_BASE
    return None


class MasseyContext:
    """Witnesses h_xi and c_{xi,eta} for the products A and F.

    Defaults follow the canonical choices: h_xi from the u-decomposition,
    c_{u_1,u_j} = c_{1,j}, c_{u_i,u_j} = c_{i,j}, c_{xi,xi} = 0, and otherwise
    the reduced solution of d1(x) = xi h_eta + eta h_xi.  Explicit witnesses
    may be supplied; they are checked before use.
    """

    def __init__(self, t_bound=DEFAULT_T_BOUND, forbidden=()):
        self.t_bound = t_bound
        self.h_witness: Dict[PolyF2, PolyF2] = {}
        self.c_witness: Dict[frozenset, PolyF2] = {}
        self.forbidden = {frozenset((a, b)) for a, b in forbidden}

    def set_h(self, xi, hx):
        if d1(hx) != PolyF2.gen(h(0)) * xi:
            raise MasseyError(f"d1(h_xi) != h0 xi for xi = {xi}")
        self.h_witness[xi] = hx

    def set_c(self, xi, eta, cx):
        if d1(cx) != xi * self.h_of(eta) + eta * self.h_of(xi):
            raise MasseyError(f"d1(c) != xi h_eta + eta h_xi for ({xi}, {eta})")
        self.c_witness[frozenset((xi, eta))] = cx

    def h_of(self, xi):
        hx = self.h_witness.get(xi)
        if hx is None:
            hx = canonical_h(xi)
            if d1(hx) != PolyF2.gen(h(0)) * xi:
                raise MasseyError(f"canonical h_xi fails d1(h_xi) = h0 xi for {xi}")
            self.h_witness[xi] = hx
        return hx

    def c_of(self, xi, eta):
        key = frozenset((xi, eta))
        if key in self.forbidden:
            raise ForbiddenPair("forbidden pair: the product is not defined")
        hit = self.c_witness.get(key)
        if hit is not None:
            return hit
        if xi == eta:
            cx = ZERO
        else:
            i, j = _single_u(xi), _single_u(eta)
            if i is not None and j is not None:
                cx = c_alias(*sorted((i, j)))
            else:
                target = xi * self.h_of(eta) + eta * self.h_of(xi)
                if not target:
                    cx = ZERO
                else:
                    _, _, t = target.degree
                    cx = d1_solve(target, TriDegree(0, 0, t), self.t_bound)
                    if cx is None:
                        raise MasseyError(f"xi h_eta + eta h_xi is not a boundary for ({xi}, {eta})")
        self.c_witness[key] = cx
        return cx


def massey_A(xi, eta, ctx: Optional[MasseyContext] = None) -> PolyF2:
    """h0 c_{xi,eta} + h_xi h_eta; A_{xi,xi} is h_xi^2."""
    ctx = ctx or MasseyContext()
    if xi == eta:
        return ctx.h_of(xi).square()
    return PolyF2.gen(h(0)) * ctx.c_of(xi, eta) + ctx.h_of(xi) * ctx.h_of(eta)


def massey_F(xi, zeta, eta, ctx: Optional[MasseyContext] = None) -> PolyF2:
    """xi c_{eta,zeta} + zeta c_{xi,eta} + eta c_{xi,zeta}."""
    ctx = ctx or MasseyContext()
    return xi * ctx.c_of(eta, zeta) + zeta * ctx.c_of(xi, eta) + eta * ctx.c_of(xi, zeta)


# ---------------------------------------------------------------- kappa

def _cp(*ns):
    p = ONE_POLY
    for n in ns:
        p = p * PolyF2.gen(c(n))
    return p


def kappa() -> PolyF2:
    a = alpha
    return ((a(1, 2) * _cp(11) + a(1, 3) * _cp(9) + a(1, 4) * _cp(5)) * _cp(13)
            + (a(2, 3) * _cp(2, 8) + a(2, 4) * _cp(2, 4)) * _cp(11)
            + (a(2, 3) * _cp(4, 8) + a(3, 4) * _cp(2, 4)) * _cp(9)
            + (a(2, 4) * _cp(4, 8) + a(3, 4) * _cp(2, 8)) * _cp(5))


def kappa_h0_preimage() -> PolyF2:
    """The twelve-term element whose d1 is h0 * kappa."""
    H = lambda i: PolyF2.gen(h(i))
    return (H(1) * H(2) * _cp(11, 13) + H(2) * H(3) * _cp(2, 8, 11)
            + H(2) * H(4) * _cp(2, 4, 11) + H(1) * H(3) * _cp(9, 13)
            + H(2) * H(3) * _cp(4, 8, 9) + H(3) * H(4) * _cp(2, 4, 9)
            + H(1) * H(4) * _cp(5, 13) + H(2) * H(4) * _cp(4, 5, 8)
            + H(3) * H(4) * _cp(2, 5, 8) + H(2).square() * _cp(4, 8, 11)
            + H(3).square() * _cp(2, 8, 9) + H(4).square() * _cp(2, 4, 5))


# ---------------------------------------------------------------- relations

@dataclass
class RelationVerdict:
    holds: bool
    mode: str
    difference: PolyF2
    witness: Optional[PolyF2] = None
    note: str = ""


def check_relation(lhs: PolyF2, rhs: PolyF2, mode="identical", t_bound=DEFAULT_T_BOUND) -> RelationVerdict:
    """Compare lhs and rhs in E1 ('identical') or modulo d1-boundaries."""
    diff = lhs + rhs
    degs = lhs.degrees() | rhs.degrees()
    if len(degs) > 1:
        raise AlgebraError(f"relation is not homogeneous: degrees {sorted(degs)}")
    if mode == "identical":
        return RelationVerdict(not diff, mode, diff)
    if mode != "up_to_boundary":
        raise ValueError(f"unknown mode {mode!r}")
    if not diff:
        return RelationVerdict(True, mode, diff, ZERO)
    if diff.degree.t > t_bound:
        raise BoundError(f"t = {diff.degree.t} exceeds the bound {t_bound}")
    pre = boundary_preimage(diff, t_bound)
    return RelationVerdict(pre is not None, mode, diff, pre)
