import math

import numpy as np
import pytest

from closure.gluing import torus_bundle_gluing
from returnmap.cones import cone_margin, estimate_lambda0, jacobian_spot_check, two_step_margins, verify_cones
from returnmap.return_system import (ReturnMapError, ReturnMapSystem, ReturnStep, TerminatesAtStableSet,
                                     finite_difference_jacobian, orbit, return_jacobian, return_step,
                                     sample_domain_points)


def test_system_needs_valid_gluing(circle_system):
    with pytest.raises(ReturnMapError):
        ReturnMapSystem(circle_system.asm, torus_bundle_gluing((1, 0, 1, 1)), 50.0)


def test_kappa_must_sit_below_kappa_max(circle_system):
    assert circle_system.kappa_max() == pytest.approx(1.0)
    with pytest.raises(ReturnMapError):
        circle_system.with_kappa(1.5)
    assert circle_system.reversed().kappa_max() == pytest.approx(0.5)
    with pytest.raises(ReturnMapError):
        circle_system.reversed(kappa=0.6)


def test_lambda_must_be_positive(circle_system):
    with pytest.raises(ReturnMapError):
        circle_system.with_lambda(0.0)


def test_step_lands_on_the_other_torus(circle_system):
    result = circle_system.step(1, 0.4, 0.1)
    assert isinstance(result, ReturnStep)
    assert result.component == 1
    assert 0.0 <= result.u < 2 * math.pi
    assert 0.0 <= result.v < 1.0
    assert result.entry.component == 0


def test_module_level_helpers_match_methods(circle_system):
    assert return_step(circle_system, 1, 0.4, 0.1) == circle_system.step(1, 0.4, 0.1)
    np.testing.assert_array_equal(return_jacobian(circle_system, 1, 0.4, 0.1),
                                  circle_system.jacobian(1, 0.4, 0.1))


def test_landing_on_tangent_circle_terminates(circle_system):
    result = circle_system.step(1, math.pi / 2, 0.25)
    assert isinstance(result, TerminatesAtStableSet)
    assert result.component == 0
    assert result.u == pytest.approx(math.pi)
    steps = orbit(circle_system, 1, math.pi / 2, 0.25, 5)
    assert len(steps) == 1


def test_orbit_runs_requested_steps(circle_system):
    steps = orbit(circle_system, 1, 0.4, 0.1, 3)
    assert len(steps) == 3
    assert all(isinstance(s, ReturnStep) for s in steps)


def test_jacobian_matches_finite_differences(circle_system):
    for component, u, v in sample_domain_points(circle_system, 8, seed=3, max_abs_x=1.0):
        exact = circle_system.jacobian(component, u, v)
        approx = finite_difference_jacobian(circle_system, component, u, v)
        np.testing.assert_allclose(approx, exact, rtol=1e-4, atol=1e-4)


def test_jacobian_preserves_area(circle_system):
    for component, u, v in sample_domain_points(circle_system, 10, seed=1):
        assert abs(np.linalg.det(circle_system.jacobian(component, u, v))) == pytest.approx(1.0)


def test_vectorized_jacobians_agree(circle_system):
    points = sample_domain_points(circle_system, 6, seed=2)
    for component, u, v in points:
        _, u2, _ = circle_system.land(component, u, v)
        stacked = circle_system.scaled_jacobians_at(component, np.array([u2]))
        np.testing.assert_allclose(stacked[0], circle_system.scaled_jacobian(component, u, v), rtol=1e-10)


def test_jacobian_refused_next_to_tangent_circle(circle_system):
    with pytest.raises(ReturnMapError):
        circle_system.jacobian(1, math.pi / 2, 0.25)


def test_reversed_system_steps_from_incoming_tori(circle_system):
    reverse = circle_system.reversed()
    assert [c.index for c in reverse.source_components()] == [0]
    result = reverse.step(0, 0.4, 0.1)
    assert isinstance(result, ReturnStep)
    assert result.component == 0


def test_identity_is_on_the_cone_boundary():
    contained, margin, expansion = cone_margin(np.eye(2), 0.2)
    assert not contained
    assert margin == pytest.approx(0.0, abs=1e-15)
    assert expansion == pytest.approx(1.0)


def test_strong_shear_maps_cone_inside():
    contained, margin, expansion = cone_margin(np.array([[1.0, 1.0], [100.0, 101.0]]), 0.2)
    assert contained
    assert margin > 0
    assert expansion > 2


def test_cones_verified_at_large_lambda(circle_system):
    report = verify_cones(circle_system, grid=40)
    assert report.passed
    assert report.points > 0
    assert report.min_expansion >= 2
    assert verify_cones(circle_system.reversed(), grid=40).passed


@pytest.mark.parametrize('lam', [0.01, 0.1])
def test_cones_fail_at_small_lambda(circle_system, lam):
    report = verify_cones(circle_system.with_lambda(lam), grid=40)
    assert not report.passed
    assert report.summary()['passed'] is False


def test_cone_rows_are_kept_on_request(circle_system):
    report = verify_cones(circle_system, grid=10, keep_rows=True)
    assert report.rows.shape == (report.points, 4)


def test_lambda0_brackets_the_certificate(circle_system):
    lam0 = estimate_lambda0(circle_system, grid=200)
    assert not verify_cones(circle_system.with_lambda(0.9 * lam0), grid=200).passed
    assert verify_cones(circle_system.with_lambda(1.1 * lam0), grid=200).passed


def test_margin_grows_with_lambda(circle_system):
    margins = [verify_cones(circle_system.with_lambda(lam), grid=40).margin for lam in (1.0, 5.0, 25.0, 125.0)]
    assert margins == sorted(margins)
    assert margins[-1] > margins[0]


def test_cones_ignore_a_fiber_shift(circle_system):
    #the Jacobian depends on the landing abscissa only
    shifted = ReturnMapSystem(circle_system.asm, circle_system.spec.with_shifts([(0.0, 0.37)]),
                              circle_system.lam, circle_system.kappa)
    base, moved = verify_cones(circle_system, grid=40), verify_cones(shifted, grid=40)
    assert moved.points == base.points
    assert moved.margin == pytest.approx(base.margin, rel=1e-12)
    assert moved.min_expansion == pytest.approx(base.min_expansion, rel=1e-12)


def test_cones_survive_a_base_shift(circle_system):
    shifted = ReturnMapSystem(circle_system.asm, circle_system.spec.with_shifts([(0.3, 0.0)]),
                              circle_system.lam, circle_system.kappa)
    base, moved = verify_cones(circle_system, grid=40), verify_cones(shifted, grid=40)
    assert moved.passed and base.passed
    assert moved.margin == pytest.approx(base.margin, rel=0.05)
    assert moved.min_expansion == pytest.approx(base.min_expansion, rel=0.05)


def test_lambda0_not_certifiable_when_bracket_fails(circle_system):
    with pytest.raises(ReturnMapError):
        estimate_lambda0(circle_system, grid=40, bracket=(1e-3, 1e-2))


def test_two_step_margins_positive(circle_system):
    pairs = two_step_margins(circle_system, sample_domain_points(circle_system, 10, seed=4))
    assert pairs
    assert all(single > 0 and double > 0 for single, double in pairs)


def test_jacobian_spot_check_is_seeded(circle_system):
    gap = jacobian_spot_check(circle_system, n=8, seed=3)
    assert gap < 1e-3
    assert jacobian_spot_check(circle_system, n=8, seed=3) == gap
    assert jacobian_spot_check(circle_system, n=8, seed=4) != gap
