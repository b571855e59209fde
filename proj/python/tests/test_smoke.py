import json
import math

import pytest

import canonproc as cp


def test_four_signs_first_moment():
    # E|e1+e2+e3+e4| = (2*4 + 8*2 + 6*0) / 16
    assert cp.bernoulli_norm_exact([1, 1, 1, 1], 1) == pytest.approx(1.5, abs=1e-15)


def test_gaussian_first_moment_constant():
    assert cp.gaussian_moment_constant(1) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-14)
    assert cp.gaussian_moment_constant(2) == pytest.approx(1.0, rel=1e-14)


def test_proxy_fields():
    d = cp.bernoulli_norm_proxy([3, -1, 2], 1)
    assert d["ell1_part"] == 3.0
    assert d["tail_l2"] == pytest.approx(math.sqrt(5))
    assert d["proxy"] == pytest.approx(3 + math.sqrt(5))


def test_simplex_sup_and_chain_check():
    s = cp.generate_set("simplex", 3, 3)
    assert len(s) == 3 and s.dim == 3
    # E max(e1,e2,e3) = 1 - 2 * P(all negative)
    assert cp.brute_force_bernoulli_sup(s)["value"] == pytest.approx(0.75, abs=1e-15)
    rep = cp.verify_theorem2(s, "bernoulli")
    assert not rep["violation"] and rep["ratio"] <= 4


def test_two_point_gamma_is_distance():
    s = cp.FiniteSet("pair", [[0, 0], [3, 4]])
    g = cp.exhaustive_gamma(s, "gaussian")
    assert g["value"] == pytest.approx(5.0, rel=1e-12)
    assert cp.chain_bound(s)["value"] >= g["value"] - 1e-12


def test_contraction_and_fit():
    s = cp.generate_set("sphere", 6, 8, seed=3)
    assert cp.check_condition(s, "clamp")["holds"]
    assert cp.fit_min_c(s, "scale:2")["c_star"] == pytest.approx(2.0, abs=1e-4)


def test_decompose_runs():
    s = cp.generate_set("blocks", 16, 4, seed=1, params=[4])
    r = cp.decompose(s, samples=2000, seed=1)
    assert r["objective"] <= min(g["objective"] for g in r["grid"]) + 1e-12
    assert math.isfinite(r["k_emp"])


def test_weak_constant_of_identical_systems():
    x = [[1.0, 0.0], [0.5, 0.5], [0.0, 2.0]]
    r = cp.weak_moment_constant(x, x, "euclidean", functionals=8, p_max=3)
    assert r["constant"] == pytest.approx(1.0)


def test_errors_are_typed():
    with pytest.raises(cp.ValidationError):
        cp.FiniteSet("dup", [[1.0], [1.0]])
    with pytest.raises(cp.ParseError):
        cp.parse_set("{not json")
    with pytest.raises(cp.Error):
        cp.generate_set("nonsense", 2, 2)


def test_set_round_trip():
    s = cp.generate_set("ellipsoid", 4, 5, seed=9)
    assert cp.parse_set(cp.format_set(s)) == s


def test_cli_suite_subset():
    code, out, err = cp.run_cli(["suite", "--only", "2", "--quiet"])
    assert code == 0
    rep = json.loads(out)
    assert rep["subcommand"] == "suite" and rep["result"]["passed"]
    code, _, _ = cp.run_cli(["moments", "--bogus"])
    assert code == 2
