import math

import pytest

odetree = pytest.importorskip("odetree")


def test_rooted_tree_counts():
    assert odetree.rooted_tree_counts(6) == [1, 1, 2, 4, 9, 20]


def test_progeny_law():
    t = math.log(2.0)
    assert odetree.yule_progeny_pmf(1.0, t, 1) == pytest.approx(0.5)
    assert odetree.yule_progeny_pmf(1.0, t, 3) == pytest.approx(0.25)
    assert odetree.yule_progeny_pmf(1.0, t, 4) == 0.0
    assert odetree.yule_pgf(1.0, t, 1.2) == pytest.approx(0.6 / 0.28)


def test_density_and_dominance():
    d = odetree.exponential_density(1.0)
    assert d.tail(math.log(2.0)) == pytest.approx(0.5)
    p = odetree.piecewise_density(1.0, "C2", 0.3, 1.0, 0.1)
    assert odetree.verify_dominance(p, 1.0)["pass"]


def test_lambda0_and_intervals():
    l0 = odetree.solve_lambda0(2.0)
    assert 1.5 < l0 < math.e
    t_max, blow_up = odetree.existence_interval_monomial(2, 1.0, 1.0)
    expect = (2.0 / 3.0) * min(1.0 / (2.0 * math.e), -math.log(1.0 - 2.0**-6))
    assert t_max == pytest.approx(expect, abs=1e-12)
    assert blow_up == pytest.approx(1.0)


def test_series_and_rk4():
    s = odetree.butcher_series("monomial", 1.0, 2, 0.05, 5)
    closed = odetree.monomial_solution(2, 1.0, 0.05)
    assert abs(s - closed) < 2.0 * 0.05**6
    assert odetree.rk4("monomial", 1.0, 2, 0.05) == pytest.approx(closed)


def test_small_solve():
    d = odetree.exponential_density(0.5)
    r = odetree.solve("monomial", 1.0, 2, 0.05, d, 40000, seed=3)
    closed = odetree.monomial_solution(2, 1.0, 0.05)
    assert abs(r["mean"][0] - closed) <= 6.0 * r["std_error"][0]


def test_certify_keys():
    d = odetree.exponential_density(0.5)
    cert = odetree.certify("monomial", 1.0, 2, d, 0.5, 0.1)
    assert cert["integrability_I"].startswith("PASS")
    assert cert["uniform_I"].startswith("PASS")
    assert float(cert["C0"]) > 1.0
