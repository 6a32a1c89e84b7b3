"""Projections phi_m of Ray's elements into E1 and the Cartan-rule closure test.

The database holds three kinds of lines:

    PHI m = poly                    projection expansion of Phi_m
    S parts | target -> poly        a value S_omega(target)
    STEP m | parts | value          a derivation step S_omega phi_m = value

Applying S_omega to phi_m through the Cartan rule must reproduce the
projection of S_omega Phi_m computed from Kochman's expansion.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .algebra import (
    C_BASE, H_BASE, U_BASE, ZERO, ONE_POLY, AlgebraError, Monomial, ParseError, PolyF2,
    code_degree, code_name, is_power_of_two, parse_poly,
)
from .binomial import PhiVector
from .hopf import OpIndex, s_on_phi
from functools import lru_cache

from .mass import boundary_preimage, cell_basis, d1, homology

DATA_DIR = Path(__file__).parent / "data" / "v1"
PROJECTION_INDICES = (3, 5, 6, 7, 9, 10, 11, 12, 13, 14)


class DataError(ValueError):
    """A malformed or inconsistent data file line."""

    def __init__(self, message, path=None, line=None):
        where = f"{path}:{line}: " if path is not None else ""
        super().__init__(where + message)
        self.path = path
        self.line = line


class InsufficientData(LookupError):
    def __init__(self, missing):
        self.missing = sorted(missing)
        super().__init__("missing records: " + ", ".join(self.missing))


@dataclass(frozen=True)
class ActionRecord:
    omega: Tuple[int, ...]
    target: str  # 'c5', 'u3' or 'phi7'
    value: PolyF2
    source: str = ""

    @property
    def key(self):
        return (self.omega, self.target)

    def label(self):
        return f"S {_omega_str(self.omega)} | {self.target}"


@dataclass(frozen=True)
class Step:
    m: int
    omega: Tuple[int, ...]
    printed: Optional[PolyF2]  # None where no value is written
    source: str = ""


@dataclass
class ProjectionDB:
    """Loaded data.

    ``cycle_default``: when c_n is a d1-cycle and the (0,0,t) cell of the
    value has no nonzero cycles, an unrecorded S_omega c_n is taken as 0.
    This assumes the operations commute with d1 on u,c-polynomials; every
    shipped record on a cycle target is consistent with it.
    """

    projections: Dict[int, PolyF2] = field(default_factory=dict)
    records: Dict[Tuple[Tuple[int, ...], str], ActionRecord] = field(default_factory=dict)
    steps: List[Step] = field(default_factory=list)
    cycle_default: bool = True
    alternates: Dict[Tuple[Tuple[int, ...], str], List[ActionRecord]] = field(default_factory=dict)

    def symbols(self):
        return {f"phi{m}": p for m, p in self.projections.items()}

    def replace(self, record: ActionRecord) -> "ProjectionDB":
        """Copy with one record substituted (fault injection, data patches)."""
        recs = dict(self.records)
        recs[record.key] = record
        return ProjectionDB(dict(self.projections), recs, list(self.steps), self.cycle_default,
                            {k: list(v) for k, v in self.alternates.items()})


def _omega_str(parts):
    return ",".join(map(str, parts)) if parts else "()"


def _target_degree(target):
    if target.startswith("phi"):
        return (0, 1, 8 * int(target[3:]) - 2)
    if target.startswith("u"):
        return (0, 1, 2 * (2 ** int(target[1:]) - 1))
    return (0, 0, 4 * int(target[1:]))


def _parse_target(text, symbols):
    text = text.strip()
    if text.startswith("phi"):
        if not text[3:].isdigit():
            raise ParseError(f"bad target {text!r}")
        return text
    g = parse_poly(text, symbols)
    if len(g.terms) != 1:
        raise ParseError(f"target must be one generator, got {text!r}")
    (mono,) = g.terms
    if len(mono) != 1 or mono[0][1] != 1:
        raise ParseError(f"target must be one generator, got {text!r}")
    code = mono[0][0]
    if not (U_BASE < code < H_BASE or code > C_BASE):
        raise ParseError(f"target must be a u or c generator, got {text!r}")
    return code_name(code)


def _check_value_degree(target, omega, value):
    if not value:
        return
    q, s, t = _target_degree(target)
    want = (q, s, t - 4 * sum(omega))
    deg = value.degree  # raises on inhomogeneous values
    if tuple(deg) != want:
        raise AlgebraError(f"degree {tuple(deg)} but S_{{{_omega_str(omega)}}}{target} needs {want}")


def _iter_lines(paths):
    for path in paths:
        path = Path(path)
        files = sorted(path.glob("*.txt")) if path.is_dir() else [path]
        for f in files:
            with open(f) as fh:
                for no, raw in enumerate(fh, 1):
                    line = raw.split("#", 1)[0].strip()
                    if line:
                        yield f, no, line


def _parse_parts(text):
    # '1' here is the part 1, not the empty index
    try:
        return OpIndex(int(x) for x in text.split(",")).parts
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def load_tables(paths: Iterable = (DATA_DIR,)) -> ProjectionDB:
    """Load data files (or directories of *.txt) into a database.

    Projection lines are read first so that records may use phiN symbols.
    """
    lines = list(_iter_lines(list(paths)))
    db = ProjectionDB()
    for f, no, line in lines:
        if not line.startswith("PHI"):
            continue
        try:
            head, body = line[3:].split("=", 1)
            m = int(head)
            if m in db.projections:
                raise DataError(f"duplicate projection phi{m}", f, no)
            p = parse_poly(body, db.symbols())
            if p and tuple(p.degree) != (0, 1, 8 * m - 2):
                raise AlgebraError(f"phi{m} has degree {tuple(p.degree)}")
        except DataError:
            raise
        except (ValueError, AlgebraError) as exc:
            raise DataError(str(exc), f, no) from None
        db.projections[m] = p
    sym = db.symbols()
    for f, no, line in lines:
        try:
            alt = line.startswith("ALT ")
            if alt:
                line = line[4:].lstrip()
            if line.startswith("S ") or line.startswith("S\t"):
                lhs, value = line[1:].split("->", 1)
                parts, target = lhs.split("|", 1)
                omega = _parse_parts(parts)
                target = _parse_target(target, sym)
                val = parse_poly(value, sym)
                rec = ActionRecord(omega, target, val, f"{Path(f).name}:{no}")
                if alt:
                    try:
                        _check_value_degree(target, omega, val)
                    except AlgebraError as exc:
                        raise DataError(f"ALT {rec.label()} -> {value.strip()}: {exc}", f, no) from None
                    db.alternates.setdefault(rec.key, []).append(rec)
                    continue
                if rec.key in db.records:
                    raise DataError(f"duplicate record {rec.label()} "
                                    f"(first at {db.records[rec.key].source})", f, no)
                try:
                    _check_value_degree(target, omega, val)
                except AlgebraError as exc:
                    raise DataError(f"{rec.label()} -> {value.strip()}: {exc}", f, no) from None
                db.records[rec.key] = rec
            elif line.startswith("STEP"):
                m, parts, value = line[4:].split("|")
                value = value.strip()
                printed = None if value == "-" else parse_poly(value, sym)
                db.steps.append(Step(int(m), _parse_parts(parts), printed, f"{Path(f).name}:{no}"))
            elif alt or not line.startswith("PHI"):
                raise ParseError(f"unrecognised line {line!r}")
        except DataError:
            raise
        except (ValueError, AlgebraError) as exc:
            raise DataError(str(exc), f, no) from None
    return db


def data_paths():
    """Data directory: $COBORDISM_DATA if set, else the shipped files."""
    env = os.environ.get("COBORDISM_DATA")
    return [Path(env)] if env else [DATA_DIR]


# ---------------------------------------------------------------- Cartan rule

class _Val:
    """A value that is either known or unknown pending listed records."""

    __slots__ = ("poly", "missing")

    def __init__(self, poly=ZERO, missing=frozenset()):
        self.poly = poly
        self.missing = missing

    def is_zero(self):
        return not self.missing and not self.poly

    def __add__(self, other):
        if self.missing or other.missing:
            return _Val(ZERO, self.missing | other.missing)
        return _Val(self.poly + other.poly)

    def __mul__(self, other):
        # an unknown value times a known zero is still zero
        if self.is_zero() or other.is_zero():
            return _Val()
        if self.missing or other.missing:
            return _Val(ZERO, self.missing | other.missing)
        return _Val(self.poly * other.poly)


class _Omega:
    """Sub-multisets of omega as count vectors over its distinct parts."""

    def __init__(self, parts):
        self.parts = tuple(sorted(parts, reverse=True))
        self.values = tuple(sorted(set(self.parts), reverse=True))
        self.top = tuple(self.parts.count(v) for v in self.values)
        self.subs = list(product(*(range(e + 1) for e in self.top)))
        self.zero = tuple(0 for _ in self.values)

    def to_parts(self, counts):
        out = []
        for v, e in zip(self.values, counts):
            out.extend([v] * e)
        return tuple(out)

    def add(self, a, b):
        s = tuple(x + y for x, y in zip(a, b))
        return s if all(x <= e for x, e in zip(s, self.top)) else None


def project_phi_vector(v: PhiVector, db: ProjectionDB) -> _Val:
    """theta1 -> u1, Phi_{2^(j-2)} -> u_j, otherwise the stored phi_i."""
    acc = _Val()
    for i in sorted(v.terms):
        if i == 0:
            acc = acc + _Val(_gen(U_BASE + 1))
        elif is_power_of_two(i):
            acc = acc + _Val(_gen(U_BASE + i.bit_length() + 1))
        elif i in db.projections:
            acc = acc + _Val(db.projections[i])
        else:
            acc = acc + _Val(ZERO, frozenset({f"PHI {i}"}))
    return acc


def _gen(code):
    return PolyF2.monomial(Monomial(((code, 1),)))


def _empty_c_cell(t):
    return t > 0 and not cell_basis(0, 0, t)


@lru_cache(maxsize=None)
def _c_is_cycle(n):
    return not d1(_gen(C_BASE + n))


@lru_cache(maxsize=None)
def _no_c_cycles(t):
    return t > 0 and homology(0, 0, t, representatives=False).dim_cycles == 0


class _Evaluator:
    def __init__(self, omega: _Omega, db: ProjectionDB, overrides=None):
        self.om = omega
        self.db = db
        self.overrides = overrides or {}
        self.used: set = set()  # record keys consulted
        self._series: Dict[int, Dict] = {}

    def record(self, parts, name):
        key = (parts, name)
        rec = self.overrides.get(key) or self.db.records.get(key)
        if rec is not None:
            self.used.add(key)
        return rec

    def action(self, code, counts) -> _Val:
        parts = self.om.to_parts(counts)
        w = sum(parts)
        if code < C_BASE and code > U_BASE and code < H_BASE:
            rec = self.record(parts, code_name(code))
            if rec is not None:
                return _Val(rec.value)
            j = code - U_BASE
            if j == 1:
                return _Val()
            return project_phi_vector(s_on_phi(OpIndex(parts), 2 ** (j - 2)), self.db)
        if code > C_BASE:
            n = code - C_BASE
            rec = self.record(parts, f"c{n}")
            if rec is not None:
                return _Val(rec.value)
            if w > n or _empty_c_cell(4 * (n - w)):
                return _Val()
            if self.db.cycle_default and _c_is_cycle(n) and _no_c_cycles(4 * (n - w)):
                return _Val()
            return _Val(ZERO, frozenset({f"S {_omega_str(parts)} | c{n}"}))
        return _Val(ZERO, frozenset({f"S {_omega_str(parts)} | {code_name(code)}"}))

    def series(self, code):
        hit = self._series.get(code)
        if hit is None:
            hit = {self.om.zero: _Val(_gen(code))}
            for sub in self.om.subs:
                if sub != self.om.zero:
                    v = self.action(code, sub)
                    if not v.is_zero():
                        hit[sub] = v
            self._series[code] = hit
        return hit

    def mul(self, a, b):
        out: Dict = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                k = self.om.add(ka, kb)
                if k is None:
                    continue
                prod = va * vb
                if prod.is_zero():
                    continue
                out[k] = out[k] + prod if k in out else prod
        return out

    def monomial(self, mono: Monomial):
        acc = {self.om.zero: _Val(ONE_POLY)}
        for code, e in mono:
            s = self.series(code)
            for _ in range(e):
                acc = self.mul(acc, s)
        return acc.get(self.om.top, _Val())


def _cartan(omega, p: PolyF2, db: ProjectionDB, overrides=None):
    ev = _Evaluator(_Omega(omega), db, overrides)
    total = _Val()
    for mono in p.sorted_terms():
        total = total + ev.monomial(mono)
    return total, ev.used


def cartan_apply(omega, p: PolyF2, db: ProjectionDB) -> PolyF2:
    """S_omega(p) by the Cartan rule; raises InsufficientData when a needed
    value has neither a record nor a forced default."""
    if isinstance(omega, str):
        omega = _parse_parts(omega) if omega.strip() else ()
    elif isinstance(omega, OpIndex):
        omega = omega.parts
    total, _ = _cartan(tuple(omega), p, db)
    if total.missing:
        raise InsufficientData(total.missing)
    return total.poly


# ---------------------------------------------------------------- verdicts

@dataclass
class ProjectionVerdict:
    m: int
    omega: str
    verdict: str  # pass | fail | insufficient
    mode: Optional[str]  # identical | up_to_boundary when passing
    diff: str
    expected: str = ""
    got: str = ""
    missing: List[str] = field(default_factory=list)
    used: List[str] = field(default_factory=list)
    printed: Optional[str] = None
    printed_agrees: Optional[bool] = None
    variant: Optional[str] = None  # ALT records under which the pair closes
    primary_diff: Optional[str] = None  # diff under the primary records

    def to_json(self):
        return {"m": self.m, "omega": self.omega, "verdict": self.verdict,
                "mode": self.mode, "diff": self.diff, "expected": self.expected,
                "got": self.got, "missing": self.missing, "printed": self.printed,
                "printed_agrees": self.printed_agrees, "variant": self.variant,
                "primary_diff": self.primary_diff}


def _compare(exp: PolyF2, got: PolyF2):
    """(mode, diff) if got matches exp in E1 or modulo boundaries, else (None, diff)."""
    diff = exp + got
    if not diff:
        return "identical", diff
    # (0,1,t) has an empty predecessor cell, so this reduces to diff == 0;
    # the test is still run rather than assumed
    try:
        pre = boundary_preimage(diff)
    except (AlgebraError, ValueError):
        pre = None
    return ("up_to_boundary" if pre is not None else None), diff


def _alternative_overrides(db, used):
    keys = sorted(k for k in used if k in db.alternates)
    choices = [[None] + db.alternates[k] for k in keys]
    for combo in product(*choices):
        if any(c is not None for c in combo):
            yield {k: c for k, c in zip(keys, combo) if c is not None}


def verify_projection(m, omega, db: ProjectionDB, printed: Optional[PolyF2] = None) -> ProjectionVerdict:
    """Compare S_omega applied to phi_m (Cartan rule) with the projection of
    S_omega Phi_m.  When the primary records fail and ALT records were
    consulted, each substitution is tried and the closing one reported."""
    if isinstance(omega, str):
        omega = _parse_parts(omega)
    omega = tuple(sorted(omega, reverse=True))
    label = _omega_str(omega)
    exp = project_phi_vector(s_on_phi(OpIndex(omega), m), db)
    printed_text = None if printed is None else str(printed)
    if m not in db.projections:
        return ProjectionVerdict(m, label, "insufficient", None, "",
                                 missing=sorted({f"PHI {m}"} | exp.missing), printed=printed_text)
    got, used = _cartan(omega, db.projections[m], db)
    labels = sorted(f"S {_omega_str(k[0])} | {k[1]}" for k in used)
    missing = sorted(exp.missing | got.missing)
    if missing:
        return ProjectionVerdict(m, label, "insufficient", None, "", missing=missing,
                                 used=labels, printed=printed_text)
    agrees = None if printed is None else printed + exp.poly == ZERO
    mode, diff = _compare(exp.poly, got.poly)
    common = dict(expected=str(exp.poly), used=labels, printed=printed_text, printed_agrees=agrees)
    if mode:
        return ProjectionVerdict(m, label, "pass", mode, str(diff), got=str(got.poly), **common)
    for ov in _alternative_overrides(db, used):
        alt_got, _ = _cartan(omega, db.projections[m], db, ov)
        if alt_got.missing:
            continue
        alt_mode, alt_diff = _compare(exp.poly, alt_got.poly)
        if alt_mode:
            variant = "; ".join(f"ALT {r.label()} -> {r.value} ({r.source})"
                                for _, r in sorted(ov.items()))
            return ProjectionVerdict(m, label, "pass", alt_mode, str(alt_diff), got=str(alt_got.poly),
                                     variant=variant, primary_diff=str(diff), **common)
    return ProjectionVerdict(m, label, "fail", None, str(diff), got=str(got.poly), **common)


def verify_steps(db: ProjectionDB) -> List[ProjectionVerdict]:
    return [verify_projection(s.m, s.omega, db, s.printed) for s in db.steps]


def sweep_pairs(db: ProjectionDB):
    """(m, omega) pairs with phi_m stored or standard and omega drawn from the
    records and steps, limited to weights where S_omega phi_m can be nonzero."""
    omegas = {k[0] for k in db.records} | {s.omega for s in db.steps}
    ms = sorted(set(PROJECTION_INDICES) | set(db.projections))
    pairs = []
    for m in ms:
        for om in sorted(omegas, key=lambda o: (sum(o), o)):
            if om and sum(om) <= 2 * m - 1:
                pairs.append((m, om))
    return pairs


def _verify_pair(args):
    m, om, db = args
    return verify_projection(m, om, db)


@dataclass
class ProjectionReport:
    items: List[ProjectionVerdict]

    def counts(self):
        out = {"pass": 0, "fail": 0, "insufficient": 0}
        for it in self.items:
            out[it.verdict] += 1
        return out

    def to_json(self):
        return {"counts": self.counts(), "items": [it.to_json() for it in self.items]}


def verify_all(db: ProjectionDB, jobs: int = 1) -> ProjectionReport:
    pairs = sweep_pairs(db)
    if jobs > 1 and len(pairs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            items = list(ex.map(_verify_pair, [(m, om, db) for m, om in pairs], chunksize=8))
    else:
        items = [verify_projection(m, om, db) for m, om in pairs]
    return ProjectionReport(items)
