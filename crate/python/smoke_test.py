"""Smoke test for the quasihopf_py extension (build with `pip install --no-build-isolation crates/py`)."""

import json

import pytest

import quasihopf_py as qh


def test_field_arithmetic():
    z = qh.Cyc.zeta()
    assert z ** 8 == qh.Cyc(1)
    assert z * z == qh.Cyc("i")
    assert (qh.Cyc("1/2") + 1) * 2 == qh.Cyc(3)
    assert qh.Cyc(2).inverse() == qh.Cyc("1/2")
    with pytest.raises(ZeroDivisionError):
        qh.Cyc(1) / 0
    with pytest.raises(ValueError):
        qh.Cyc("zeta^^")


def test_presets_verify():
    u = qh.QuasiBialgebra.standard()
    assert u.dim == 16 and u.has_r()
    reports = u.verify()
    assert len(reports) == 7
    assert u.all_pass()
    c = qh.QuasiBialgebra.cartan(3)
    assert c.dim == 4 and c.all_pass()


def test_twist_preserves_axioms():
    for q in (qh.QuasiBialgebra.cartan(), qh.QuasiBialgebra.standard()):
        assert q.twisted(seed=7).all_pass()


def test_bad_beta():
    with pytest.raises(ValueError):
        qh.QuasiBialgebra.cartan(2)


def test_rmatrix_and_coproduct():
    out = qh.solve_rmatrix("i")
    assert out["solution"]["exists"]
    assert len(out["r_fe"]) == 4
    v = qh.classify_coproduct("1,1,1,1", "i", "1,1,1,1", "i")
    assert not v["accepted"]
    v = qh.classify_coproduct("1,1,1,1", "1", "1,i,-1,-i", "-1")
    assert v["accepted"]


def test_fusion():
    assert qh.fuse("M[1,2]*M[1,2]", 3) == "M[1,1] + M[1,3]"
    terms = qh.fuse_terms("Fbar[1,1]*F[1,1]", 3)
    # projective summands at s = p are simple and print as M
    assert all(t["kind"] == "P" or (t["kind"] == "M" and t["s"] == 3) for t in terms)
    with pytest.raises(ValueError):
        qh.fuse("F[1,1]*F[1,1]", 2)


def test_pipeline_fault():
    rep = qh.pipeline(json.dumps({"fault": {"phi_component": [1, 2, 3], "value": "1"}}))
    assert not rep["certified"]


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
