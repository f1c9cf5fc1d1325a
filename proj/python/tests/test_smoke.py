import math

import numpy as np
import pytest

import conesmooth as cs


def test_default_profile_constants():
    p = cs.build_profile()
    assert p.r1 == pytest.approx(0.125)
    assert p.variant == "standard"
    assert p.phi(0.25 + p.r1)[0] == pytest.approx(1.0, abs=1e-9)
    assert all(passed for _, passed in cs.smoothness(p).values())


def test_ricci_matches_forms_oracle():
    p = cs.build_profile(0.05)
    for r in (0.1, 0.3, 1.0):
        closed = cs.ricci_diag(p, r)
        oracle = cs.ricci_from_forms(p, r)
        assert closed == pytest.approx(oracle, rel=1e-6, abs=1e-9)


def test_verify_default_and_negative_control():
    good = cs.verify(cs.build_profile(), n_grid=512)
    assert [rep["label"] for rep in good][-1] == "Sweep"
    assert all(rep["pass"] for rep in good)
    bad = cs.verify(cs.build_profile(negative_control=True), n_grid=512)
    assert not bad[-1]["pass"]
    assert min(bad[-1]["minima"]) < -0.1


def test_profile_round_trip(tmp_path):
    p = cs.build_profile(0.05)
    path = str(tmp_path / "profile.json")
    cs.save_profile(path, p)
    back = cs.load_profile(path)
    assert back.r1 == p.r1
    assert back.phi(1.0) == p.phi(1.0)


def test_metric_lab():
    assert cs.quotient_dist_round((1, 0, 0, 0), (0, 1, 0, 0)) == 0.0
    assert cs.quotient_dist_round((1, 0, 0, 0), (0.5, 0.5, 0.5, 0.5)) == pytest.approx(math.pi / 3)
    d = cs.sample_annulus(cs.build_profile(0.05), 0.5, 2.0, 100, 7)
    assert d.shape == (100, 100)
    assert np.array_equal(d, d.T)
    assert np.all(np.diag(d) == 0.0)


def test_collapse_shrinks():
    rows = cs.collapse(cs.build_profile(0.05), [1.0, 0.25], n=150, seed=5)
    assert rows[1]["gh_bound"] < rows[0]["gh_bound"]


def test_obstruction():
    v = cs.obstruction()
    assert (v["lhs"], v["rhs"], v["consistent"]) == ("7/4", "9/4", False)
    assert cs.obstruction(chi="10", group="I*")["consistent"]
    with pytest.raises(ValueError):
        cs.obstruction(group="E8")
