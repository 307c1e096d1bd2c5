import json

import numpy as np
import pytest

from hodgecheck.report import (
    VerificationReport,
    canonical_json,
    floor_check,
    jsonable,
    passing,
    reporting,
    strip_timing,
)
from hodgecheck.sampling import derive_rng, random_plane_sg, random_siegel_point


def test_check_semantics():
    good = passing("a", "anchor", 1e-12, 1e-9)
    bad = passing("b", "anchor", 1e-3, 1e-9)
    assert good.passed and not bad.passed
    assert good.asserting and bad.asserting
    lo = floor_check("c", "anchor", 0.5, floor=-1e-10)
    hi = floor_check("d", "anchor", -1.0, floor=-1e-10)
    assert lo.passed and not hi.passed
    note = reporting("e", "anchor", 0.123)
    assert not note.asserting
    assert note.passed is None


def test_report_conjunction_ignores_reporting():
    rep = VerificationReport("demo", {"seed": 0})
    rep.add(passing("a", "x", 0.0, 1.0))
    rep.add(reporting("b", "x", 99.0))
    assert rep.passed
    rep.add(passing("c", "x", 2.0, 1.0))
    assert not rep.passed


def test_report_merge_prefixes():
    a = VerificationReport("outer", {})
    b = VerificationReport("inner", {})
    b.add(passing("leaf", "x", 0.0, 1.0))
    a.merge(b, prefix="g2.")
    names = [c["name"] for c in a.to_dict()["checks"]]
    assert names == ["g2.leaf"]


def test_canonical_json_sorted_and_strict():
    s = canonical_json({"b": 1, "a": [2, 3]})
    assert s.index('"a"') < s.index('"b"')
    assert json.loads(s) == {"a": [2, 3], "b": 1}
    with pytest.raises(ValueError):
        canonical_json({"x": float("nan")})


def test_jsonable_numpy():
    out = jsonable({"a": np.float64(1.5), "b": np.int64(2),
                    "c": np.arange(3), "d": (np.True_, None)})
    assert out == {"a": 1.5, "b": 2, "c": [0, 1, 2], "d": [True, None]}
    assert canonical_json(out)


def test_strip_timing_recursive():
    doc = {"wall_time_ms": 5,
           "suites": [{"name": "s", "wall_time_ms": 7, "keep": 1}],
           "nested": {"wall_time_ms": 9}}
    out = strip_timing(doc)
    assert "wall_time_ms" not in out
    assert "wall_time_ms" not in out["suites"][0]
    assert "wall_time_ms" not in out["nested"]
    assert out["suites"][0]["keep"] == 1
    # input untouched
    assert doc["wall_time_ms"] == 5


def test_derived_streams_are_stable():
    a = derive_rng(42, "tag", 1).standard_normal(4)
    b = derive_rng(42, "tag", 1).standard_normal(4)
    c = derive_rng(42, "tag", 2).standard_normal(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_random_siegel_point_valid():
    rng = derive_rng(1, "sp")
    for g in (1, 2, 3, 4):
        p = random_siegel_point(g, rng)
        assert np.array_equal(p.tau, p.tau.T)
        assert np.linalg.eigvalsh(p.y).min() > 0


def test_random_plane_orthonormal():
    rng = derive_rng(2, "plane")
    y = random_plane_sg(3, 2, rng)
    gram = y.basis @ y.basis.conj().T
    assert np.allclose(gram, np.eye(2))
    assert y.ambient_tag == "Sg"
