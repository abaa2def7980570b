import math

import numpy as np
import pytest

import ifsc


def test_version():
    assert ifsc.__version__ == "0.1.0"


def test_rates_on_a_diagonal_source():
    k_xx = np.diag([3.0, 15.0])
    assert ifsc.berger_tung_rate(k_xx) == pytest.approx(3.0)
    rate, a = ifsc.if_opt_rate(k_xx)
    assert rate == pytest.approx(4.0)
    assert abs(round(np.linalg.det(a.astype(float)))) >= 1
    suc_rate, _ = ifsc.if_suc_opt_rate(k_xx)
    assert suc_rate == pytest.approx(4.0)


def test_rate_ordering_under_precoding():
    u = ifsc.sample_haar_orthogonal(2, seed=5)
    assert np.allclose(u.T @ u, np.eye(2), atol=1e-10)
    report = ifsc.precoded_rates(np.array([4.0, 16.0]), u)
    assert report.r_bt == pytest.approx(3.0)
    assert report.r_bt <= report.r_if_suc + 1e-9 <= report.r_if_opt + 2e-9


def test_lattice_primitives():
    lengths, witnesses = ifsc.successive_minima(np.diag([2.0, 4.0]))
    assert lengths == pytest.approx([2.0, 4.0])
    assert witnesses.shape == (2, 2)
    length, coeff = ifsc.shortest_vector(np.eye(3))
    assert length == pytest.approx(1.0)
    assert np.abs(coeff).sum() == 1
    pts = ifsc.integer_points_in_ball(2, 1.5)
    assert pts.shape == (8, 2)


def test_bounds_constants():
    assert ifsc.suc_outage_constant() == pytest.approx(2 * math.pi * (5 + 3 * math.sqrt(2)))
    assert ifsc.nvd_excess_bound(2, 1.0) == pytest.approx(48.0)
    assert ifsc.transference_constant(2) == pytest.approx(5.0 / 3.0)
    with pytest.raises(ifsc.Error):
        ifsc.suc_outage_bound(0.5)


def test_union_bound_decreases():
    d = np.array([2.0**2, 2.0**26])
    hi = ifsc.if_union_bound(d, 14.0, 2.0)
    lo = ifsc.if_union_bound(d, 14.0, 6.0)
    assert 0 <= lo < hi


def test_outage_curve_runs_and_is_deterministic():
    dr = [0.0, 1.0, 2.0, 3.0]
    a = ifsc.worst_case_outage_curve(2, 6.0, dr, grid_step=1.0, trials=300, seed=3)
    b = ifsc.worst_case_outage_curve(2, 6.0, dr, grid_step=1.0, trials=300, seed=3, workers=2)
    assert a.outage == b.outage
    assert a.outage[0] >= 0.99
    assert all(x >= y for x, y in zip(a.outage, a.outage[1:]))


def test_grid_guarantee():
    p = ifsc.cyclotomic_precoder(2)
    bound, grid_max, slack, argmax = ifsc.grid_rate_guarantee(2, 8.0, 0.01, p.matrix)
    assert bound == pytest.approx(grid_max + slack)
    assert argmax.sum() == pytest.approx(8.0)
    rate = ifsc.precoded_scheme_rate(np.array([2.0**5, 2.0**11]), p.matrix)
    assert rate <= bound + 1e-9


def test_errors_surface_as_python_exceptions():
    with pytest.raises(ifsc.Error):
        ifsc.if_rate_for_matrix(np.zeros((2, 2)), np.array([[1, 2], [2, 4]]))
    with pytest.raises(ifsc.Error):
        ifsc.cholesky_lower(np.array([[1.0, 2.0], [2.0, 1.0]]))
