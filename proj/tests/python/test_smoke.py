import cmath
import math

import pytest

import resokit


def test_free_potential_has_unit_jost():
    assert resokit.jost(resokit.Potential(), 2 - 1j) == pytest.approx(1.0)


def test_box_resonances():
    zeros = resokit.resonances(resokit.Potential.box(1.0, 4.0), (0.1, 20, -5, -0.01))
    assert len(zeros) == 6
    z, m = zeros[0]
    assert m == 1
    assert abs(z - (3.3797188375310685 - 0.98466905381792069j)) < 1e-9
    # kappa cos kappa = i k sin kappa at every zero
    for k, _ in zeros:
        kap = cmath.sqrt(k * k - 4)
        assert abs(kap * cmath.cos(kap) - 1j * k * cmath.sin(kap)) < 1e-8 * abs(k)


def test_point_set_analytics():
    pts = [-1j, 3 - 4j]
    assert resokit.blaschke_sum(pts) == pytest.approx(0.5 + 4 / 26)
    assert resokit.counting_function(pts, 2.0) == 1
    assert resokit.phase_sum(pts, 0.0) == pytest.approx(1.0 + 4 / 25)


def test_lens_length():
    (length,) = resokit.cluster_boundary_lengths([-5j, 1 - 5j], 1.0)
    assert length == pytest.approx(8 * math.pi / 3, abs=1e-9)


def test_interpolation_strip():
    nodes = [-2j, 1 - 3j, -1 - 4.5j, 0.5 - 6j, -2 - 7j, 3 - 9j]
    res = resokit.interpolate(nodes, 3.0, strategy="strip", h_source="sinc")
    assert res["ok"]
    assert res["max_residual"] <= 1e-8
    assert abs(res["g"](0)) <= 1e-12
    for lam in nodes:
        assert abs(res["g"](lam) - lam * cmath.exp(-3j * lam)) <= 1e-8 * (1 + abs(lam))


def test_obstruction_profile():
    rows = resokit.obstruction_profile("log1p", "pow:0.5", K=8)
    assert len(rows) == 8
    assert all(r["p"] >= r["lower_bound"] for r in rows)
    assert rows[-1]["lower_bound"] > 10 * rows[0]["lower_bound"]


def test_errors():
    with pytest.raises(resokit.ParseError):
        resokit.obstruction_profile("nope", "sqrt")
    with pytest.raises(resokit.DomainError):
        resokit.obstruction_profile("log1p", "log1p")
    with pytest.raises(resokit.ResokitError):
        resokit.interpolate([1j], 1.0)
