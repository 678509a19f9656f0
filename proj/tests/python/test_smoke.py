from fractions import Fraction

import pytest

import comp_dof as cd


def test_closed_form_tau():
    assert cd.closed_form_tau("local", 2, 1) == (Fraction(4, 5), "exact")
    assert cd.closed_form_tau("full", 3) == (Fraction(5, 8), "upper bound")


def test_scheme_verifies():
    plan = cd.plan_clusters(7, 3, 1)
    assert plan.active_users() == [1, 2, 3, 5, 6, 7]
    h = cd.realize(plan.topology(), 42)
    report = cd.verify_zero_interference(h, plan, cd.design_beams(h, plan))
    assert report["max_relative_residual"] < 1e-9
    assert report["structural_silence"]


def test_reuse_fraction():
    assert cd.plan_dof(24, 2, 2)["interior_average"] == Fraction(2, 3)


def test_search_and_bounds():
    t = cd.build_topology(cd.Connectivity.LocalShifted, 6, 2)
    result = cd.max_zf_dof(t, 2)
    assert result["value"] == 4
    bound = cd.subset_bound(cd.spiral_assign(5, 2))
    assert Fraction(bound["value_num"], bound["value_den"]) == 3


def test_errors_surface_as_exceptions():
    with pytest.raises(cd.Error):
        cd.plan_clusters(4, 2, 1)
    with pytest.raises(ValueError):
        cd.spiral_assign(3, 4)


def test_reconstruction_is_exact_without_noise():
    h = cd.realize(cd.build_topology(cd.Connectivity.LocalShifted, 6, 1), 3)
    x = [float(k) for k in range(1, 7)]
    out = cd.wyner_reconstruct(h, 1, x, [0.0] * 6)
    assert all(v == 0.0 for v in out["residuals"].values())


def test_simulate_plan_shapes():
    plan = cd.plan_clusters(6, 2, 2)
    s = cd.simulate_plan(plan, cd.power_sweep_db(30, 60, 10))
    assert len(s["rates"]) == 6
    assert len(s["slopes"]) == 6
