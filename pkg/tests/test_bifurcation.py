"""Bifurcation point formulas, branch directions, predator-prey curves."""

import numpy as np
import pytest

from nrd import (
    CoopLV,
    Domain1D,
    NonlocalLogistic,
    PredatorPreyCurves,
    RMNonlocal,
    ScalarUserModel,
    coop_bif_points,
    coop_direction,
    coop_p_sharp,
    pp_hopf_points,
    pp_scenario,
    pp_steady_points,
    scalar_bif_points,
    scalar_direction,
)
from nrd.bifurcation import _coop_second_poly, _coop_second_theta
from nrd.errors import (
    BaseStateUnstable,
    DegenerateBifurcation,
    DegenerateCase,
    NotDestabilizable,
)

DOM1 = Domain1D(l=1.0, N=64)
DOM2 = Domain1D(l=2.0, N=64)
DOM4 = Domain1D(l=4.0, N=64)

COOP = CoopLV(a=1.0, b=0.1, c=0.1, d=1.0)
RM = RMNonlocal(k=0.5, m=6.0, theta=1.0)


# -- scalar equation ---------------------------------------------------------


def test_scalar_points_closed_form():
    m = NonlocalLogistic(a=0.1, b=1.1)
    pts = scalar_bif_points(m.f_u, m.r, DOM2, 4)
    assert [(p.kind, p.param_name, p.mode) for p in pts] == [
        ("SteadyState", "d", i) for i in range(1, 5)
    ]
    # d_i = r f_u / lambda_i with f_u = 0.1, lambda_i = (i/2)^2
    np.testing.assert_allclose(
        [p.value for p in pts], [0.4, 0.1, 0.4 / 9, 0.025], rtol=1e-15
    )


def test_scalar_points_need_positive_slope():
    with pytest.raises(NotDestabilizable):
        scalar_bif_points(0.0, 1.0, DOM2, 3)
    with pytest.raises(NotDestabilizable):
        scalar_bif_points(-0.5, 1.0, DOM2, 3)


def test_scalar_direction_reference_is_supercritical():
    d = scalar_direction(NonlocalLogistic(a=0.1, b=1.1), DOM2)
    assert d.first == 0.0
    assert d.second == pytest.approx(-0.22666666666666668, abs=1e-14)
    assert d.verdict == "supercritical-pitchfork"


def test_scalar_direction_flipped_parameters_is_subcritical():
    d = scalar_direction(NonlocalLogistic(a=1.0, b=2.0), DOM2)
    assert d.second == pytest.approx(4.0 / 3.0, abs=1e-12)
    assert d.verdict == "subcritical-pitchfork"


def test_scalar_direction_is_domain_covariant():
    # d_i scales as l^2 through lambda_1 and so does the curvature
    a = scalar_direction(NonlocalLogistic(a=0.1, b=1.1), Domain1D(l=1.0))
    b = scalar_direction(NonlocalLogistic(a=0.1, b=1.1), Domain1D(l=2.0))
    assert b.second == pytest.approx(4.0 * a.second, rel=1e-12)


def _scalar_user(kin):
    return ScalarUserModel(kinetics=kin, n_species_=1, equilibrium_values=[1.0])


def test_scalar_direction_guards():
    # homogeneous equilibrium unstable: f_u + f_ubar > 0
    unstable = _scalar_user(
        lambda U, A, r: np.stack([r * (-U[0] + 0.5 * U[0] ** 2 + 0.5 * U[0] * A[0])])
    )
    with pytest.raises(BaseStateUnstable):
        scalar_direction(unstable, DOM2)

    # f_u + f_ubar = 0: the zero-mode correction is singular
    degenerate = _scalar_user(
        lambda U, A, r: np.stack([r * (U[0] - A[0] - (A[0] - 1.0) ** 2)])
    )
    with pytest.raises(DegenerateCase):
        scalar_direction(degenerate, DOM2)

    # linear kinetics: every curvature integral vanishes
    flat = _scalar_user(lambda U, A, r: np.stack([r * (1.0 + 0.1 * U[0] - 1.1 * A[0])]))
    with pytest.raises(DegenerateBifurcation):
        scalar_direction(flat, DOM2)

    with pytest.raises(NotDestabilizable):
        scalar_direction(
            _scalar_user(lambda U, A, r: np.stack([r * U[0] * (1.0 - A[0])])), DOM2
        )


# -- cooperative pair --------------------------------------------------------


def test_coop_points_exact_fractions():
    pts = coop_bif_points(COOP, DOM1, 3)
    assert [p.mode for p in pts] == [1, 2, 3]
    assert all(p.param_name == "beta" for p in pts)
    # beta_j = b c u* v* / (lambda_j (lambda_j + d v*)) with u* = v* = 10/9
    assert pts[0].value == pytest.approx(1.0 / 171.0, rel=1e-14)
    assert pts[1].value == pytest.approx(1.0 / 1656.0, rel=1e-14)
    assert pts[0].kernel_slope == pytest.approx(1.0 / 19.0, rel=1e-14)
    values = [p.value for p in pts]
    assert values == sorted(values, reverse=True)


def test_coop_threshold_monotone_in_mode():
    pts = coop_bif_points(COOP, DOM1, 8)
    vals = [p.value for p in pts]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_coop_direction_reference():
    d = coop_direction(COOP, DOM1)
    assert d.first == 0.0
    assert d.second == pytest.approx(-0.6341618841866691, abs=1e-14)
    assert d.verdict == "supercritical-pitchfork"


def test_coop_direction_two_routes_agree():
    # the recursion-built correction and the fully expanded polynomial are
    # independent derivations of the same curvature
    rng = np.random.default_rng(7)
    checked = 0
    while checked < 100:
        a, b, c, dd = rng.uniform(0.2, 3.0, size=4)
        if a * dd - b * c <= 1e-3:
            continue
        model = CoopLV(a=a, b=b, c=c, d=dd)
        lam1 = rng.uniform(0.3, 4.0)
        t = float(_coop_second_theta(model, lam1))
        p = float(_coop_second_poly(model, lam1))
        assert t == pytest.approx(p, rel=1e-9), (a, b, c, dd, lam1)
        checked += 1


def test_coop_p_sharp():
    beta1 = coop_bif_points(COOP, DOM1, 1)[0].value
    # at the mode-1 threshold the marginal wave number is exactly lambda_1 = 1
    assert coop_p_sharp(COOP, beta1) == pytest.approx(1.0, rel=1e-12)
    betas = np.linspace(1e-4, 5e-3, 20)
    sharps = [coop_p_sharp(COOP, b) for b in betas]
    assert all(a > b for a, b in zip(sharps, sharps[1:]))  # decreasing in beta


# -- predator-prey curves ----------------------------------------------------


def test_pp_reference_constants():
    curves = PredatorPreyCurves(k=0.5, theta=1.0, d1=0.005, d2=1.0)
    assert curves.lambda_star == pytest.approx(np.sqrt(1.5) - 1.0, abs=1e-15)
    assert curves.lambda_sharp == pytest.approx(0.3187293044088437, abs=1e-14)
    assert curves.M == pytest.approx(0.006982097971003817, abs=1e-14)
    assert curves.C1(curves.lambda_star) == pytest.approx(0.10102051443364381, abs=1e-14)


def test_pp_window_brackets_lambda_sharp():
    curves = PredatorPreyCurves(k=0.5, theta=1.0, d1=0.005, d2=1.0)
    lo, hi = curves.window
    assert lo == pytest.approx(0.2, abs=1e-9)
    assert hi == pytest.approx(0.4192582403952687, abs=1e-12)
    assert lo < curves.lambda_sharp < hi
    # the window edges solve C2 = 4 theta d1/d2
    assert curves.C2(lo) == pytest.approx(4 * 0.005, rel=1e-9)
    assert curves.C2(hi) == pytest.approx(4 * 0.005, rel=1e-9)


def test_pp_window_empty_when_ratio_large():
    # d1/d2 above M leaves no wave number with a steady crossing
    assert PredatorPreyCurves(k=0.5, theta=1.0, d1=0.1, d2=0.2).window is None


def test_pp_hopf_reference_tables():
    got = [(p.mode, p.side, p.value) for p in pp_hopf_points(RM, 0.1, 0.2, DOM4)]
    assert [g[:2] for g in got] == [
        (1, "minus"), (1, "plus"), (2, "minus"), (2, "plus"),
    ]
    np.testing.assert_allclose(
        [g[2] for g in got], [0.0199, 0.4707, 0.1049, 0.3576], atol=1e-3
    )
    got2 = [(p.mode, p.side, p.value) for p in pp_hopf_points(RM, 0.006, 0.9, DOM4)]
    assert [g[:2] for g in got2] == [(1, "minus"), (1, "plus")]
    np.testing.assert_allclose([g[2] for g in got2], [0.0706, 0.4011], atol=1e-3)


def test_pp_hopf_independent_of_consumption_rate():
    # the prey-density diagram depends on (k, theta) only
    alt = RMNonlocal(k=0.5, m=8.0, theta=1.0)
    a = [(p.mode, p.side, p.value) for p in pp_hopf_points(RM, 0.1, 0.2, DOM4)]
    b = [(p.mode, p.side, p.value) for p in pp_hopf_points(alt, 0.1, 0.2, DOM4)]
    assert a == b


def test_pp_hopf_points_satisfy_trace_condition():
    curves = PredatorPreyCurves(k=0.5, theta=1.0, d1=0.1, d2=0.2)
    for p in pp_hopf_points(RM, 0.1, 0.2, DOM4):
        # the root is located to ~1e-10 in lambda, so allow that here
        assert curves.C1(p.value) == pytest.approx(
            (0.1 + 0.2) * (p.mode / 4.0) ** 2, abs=1e-9
        )


def test_pp_steady_reference_tables():
    got = [(p.mode, p.side, p.value) for p in pp_steady_points(RM, 0.005, 1.0, DOM2)]
    assert [g[:2] for g in got] == [
        (4, "minus"), (4, "plus"), (5, "minus"), (5, "plus"),
        (6, "minus"), (6, "plus"), (7, "minus"), (7, "plus"),
    ]
    np.testing.assert_allclose(
        [g[2] for g in got],
        [0.3264, 0.4136, 0.2317, 0.4126, 0.2018, 0.3868, 0.2087, 0.3423],
        atol=1e-3,
    )
    got2 = [(p.mode, p.side, p.value) for p in pp_steady_points(RM, 0.006, 0.9, DOM4)]
    assert [g[:2] for g in got2] == [
        (10, "minus"), (10, "plus"), (11, "minus"), (11, "plus"),
        (12, "minus"), (12, "plus"),
    ]
    np.testing.assert_allclose(
        [g[2] for g in got2],
        [0.2988, 0.3602, 0.2765, 0.3477, 0.2837, 0.3128],
        atol=1e-3,
    )


def test_pp_steady_points_sit_on_the_marginal_curves():
    curves = PredatorPreyCurves(k=0.5, theta=1.0, d1=0.005, d2=1.0)
    for p in pp_steady_points(RM, 0.005, 1.0, DOM2):
        lam_i = (p.mode / 2.0) ** 2
        # the point pairs (lambda, lambda_i) solve D = 0
        assert curves.D(p.value, lam_i) == pytest.approx(0.0, abs=1e-10)


def test_pp_steady_empty_when_window_closed():
    assert pp_steady_points(RM, 0.1, 0.2, DOM4) == []


def test_pp_scenarios():
    assert pp_scenario(RM, 0.1, 0.2, DOM4) == "ii"
    assert pp_scenario(RM, 0.006, 0.9, DOM4) == "iv"
    assert pp_scenario(RM, 0.005, 1.0, DOM2) == "iii"
