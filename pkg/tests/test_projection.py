import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cobordism.algebra import PolyF2, parse_poly as P
from cobordism.hopf import OpIndex
from cobordism.mass import is_cycle
from cobordism.projection import (
    ActionRecord, DataError, InsufficientData, ProjectionDB, cartan_apply, data_paths,
    load_tables, verify_all, verify_projection, verify_steps,
)


@pytest.fixture(scope="module")
def db():
    return load_tables()


@pytest.fixture(scope="module")
def report(db):
    return verify_all(db)


def _load_text(tmp_path, text, name="x.txt"):
    f = tmp_path / name
    f.write_text(text)
    return load_tables([f])


def test_loads_single_records(tmp_path):
    db = _load_text(tmp_path, "S 2 | c4 -> c2\nS 6 | c10 -> 0\n")
    assert db.records[((2,), "c4")].value == P("c2")
    assert db.records[((6,), "c10")].value == PolyF2()


def test_degree_mismatch_rejected_with_line(tmp_path):
    with pytest.raises(DataError) as exc:
        _load_text(tmp_path, "# header\nS 2 | c4 -> c2\nS 2 | c4 -> c4\n".replace("S 2 | c4 -> c2\n", ""))
    assert exc.value.line == 2
    assert "S 2 | c4" in str(exc.value)


def test_duplicate_rejected(tmp_path):
    with pytest.raises(DataError) as exc:
        _load_text(tmp_path, "S 2 | c4 -> c2\n\nS 2 | c4 -> c2\n")
    assert exc.value.line == 3
    assert "duplicate" in str(exc.value)


@pytest.mark.parametrize("line", ["S 2 | c4 -> c2 +", "S x | c4 -> c2", "T 1 | c4 -> c2",
                                  "S 2 | h3 -> 0", "PHI 3 = u1*c5 + u2"])
def test_malformed_lines(tmp_path, line):
    with pytest.raises(DataError):
        _load_text(tmp_path, line + "\n")


def test_shipped_data_is_consistent(db):
    assert sorted(db.projections) == [3, 5, 6, 7, 9, 10, 11, 12, 13, 14]
    assert len(db.records) >= 545
    for m, p in db.projections.items():
        assert tuple(p.degree) == (0, 1, 8 * m - 2)
        assert is_cycle(p)


def test_data_paths_env(monkeypatch, tmp_path):
    monkeypatch.setenv("COBORDISM_DATA", str(tmp_path))
    assert data_paths() == [tmp_path]
    monkeypatch.delenv("COBORDISM_DATA")
    assert data_paths()[0].name == "v1"


def test_cartan_examples(db):
    phi3 = db.projections[3]
    assert cartan_apply("2", phi3, db) == P("u3")
    assert cartan_apply("2,2", db.projections[5], db) == phi3
    assert cartan_apply("", phi3, db) == phi3
    assert cartan_apply("1", P("1"), db) == PolyF2()


def test_cartan_missing_record_is_insufficient():
    db = ProjectionDB(projections={}, records={}, cycle_default=False)
    with pytest.raises(InsufficientData) as exc:
        cartan_apply("2", P("c9"), db)
    assert exc.value.missing


SMALL = ["c2", "c4", "c5", "c6", "c8", "c9", "u2", "u3", "c2^2", "c4*c5", "u2*c4"]
OMEGAS = ["1", "2", "1,1", "3", "2,2", "4", "2,1", "3,1"]


def _safe(omega, p, db):
    try:
        return cartan_apply(omega, p, db)
    except InsufficientData:
        return None


@settings(max_examples=40)
@given(st.sampled_from(SMALL), st.sampled_from(SMALL), st.sampled_from(OMEGAS))
def test_cartan_additive(a, b, omega):
    db = load_tables()
    pa, pb = P(a), P(b)
    if pa.degree != pb.degree:
        return
    x, y, z = _safe(omega, pa, db), _safe(omega, pb, db), _safe(omega, pa + pb, db)
    if None not in (x, y, z):
        assert z == x + y


def _splits(parts):
    """All (omega', omega'') with omega' + omega'' = omega as multisets."""
    from itertools import product as iproduct
    counts = OpIndex(parts).exponents if parts else {}
    keys = sorted(counts)
    seen = set()
    for combo in iproduct(*[range(counts[k] + 1) for k in keys]):
        left = tuple(sorted((k for k, n in zip(keys, combo) for _ in range(n)), reverse=True))
        right = tuple(sorted((k for k, n in zip(keys, combo) for _ in range(counts[k] - n)), reverse=True))
        if (left, right) not in seen:
            seen.add((left, right))
            yield left, right


@settings(max_examples=40)
@given(st.sampled_from(SMALL), st.sampled_from(SMALL), st.sampled_from(OMEGAS))
def test_cartan_product_rule(a, b, omega):
    db = load_tables()
    pa, pb = P(a), P(b)
    direct = _safe(omega, pa * pb, db)
    total = PolyF2()
    for left, right in _splits(tuple(int(x) for x in omega.split(","))):
        x = _safe(",".join(map(str, left)), pa, db)
        y = _safe(",".join(map(str, right)), pb, db)
        if x is None or y is None:
            return
        total = total + x * y
    if direct is not None:
        assert direct == total


def test_verify_examples(db):
    v = verify_projection(9, (2, 2), db, P("phi7", db.symbols()))
    assert v.verdict == "pass" and v.printed_agrees
    v = verify_projection(6, (2, 2, 2, 2), db, P("u3"))
    assert v.verdict == "pass" and v.printed_agrees
    assert verify_projection(3, (6,), db).verdict == "pass"
    assert verify_projection(3, (6,), db).got == "0"


def test_empty_db_is_insufficient():
    empty = ProjectionDB()
    assert verify_projection(9, (2, 2), empty).verdict == "insufficient"
    assert all(v.verdict == "insufficient" for v in verify_all(empty).items)


def test_steps_report(db):
    steps = verify_steps(db)
    assert len(steps) == len(db.steps) == 105
    assert not [s for s in steps if s.verdict == "fail"]
    # every printed value that was evaluated agrees with the engine
    assert all(s.printed_agrees is not False for s in steps)


def test_report_json(report):
    body = report.to_json()
    assert set(body["counts"]) == {"pass", "fail", "insufficient"}
    for item in body["items"]:
        assert {"m", "omega", "verdict", "mode", "diff"} <= set(item)


def test_fault_injection(db, report):
    label = "S 2 | c4"
    rec = db.records[((2,), "c4")]
    bad = db.replace(ActionRecord(rec.omega, rec.target, PolyF2(), "injected"))
    after = verify_all(bad)
    touched = 0
    newly_failing = 0
    for old, new in zip(report.items, after.items):
        assert (old.m, old.omega) == (new.m, new.omega)
        if label in old.used:
            touched += 1
            newly_failing += old.verdict == "pass" and new.verdict == "fail"
        else:
            assert (old.verdict, old.diff) == (new.verdict, new.diff)
    assert touched and newly_failing
