import numpy as np
import pytest

from block_flow.integrator import (check_symmetries, integrate_orbit, sample_block_points,
                                   transit_batch)
from block_flow.model_block import (HALF_PI, BlockDomainError, BlockPoint, ShearProfile, circle_distance,
                                    closed_form_matches_symbolic, exit_map, exit_shear,
                                    exit_shear_derivative, inverse_exit_map, quotient_block, transit_time,
                                    vector_field)


def test_block_point_wraps_fiber_coordinate():
    assert BlockPoint(0.0, 1.25, 0.0).y == pytest.approx(0.25)
    assert BlockPoint(0.0, -0.25, 0.0).y == pytest.approx(0.75)


def test_block_point_rejects_points_outside_block():
    with pytest.raises(BlockDomainError):
        BlockPoint(2.0, 0.0, 0.0)
    with pytest.raises(BlockDomainError):
        BlockPoint(0.0, 0.0, -1.6)


def test_shear_profile_needs_positive_lambda():
    with pytest.raises(BlockDomainError):
        ShearProfile(0.0)
    profile = ShearProfile(2.0)
    assert profile.a(0.0) == 0.0
    assert profile.da(0.0) == pytest.approx(np.pi)


def test_field_is_tangent_to_the_walls():
    p = np.array([[0.3, 0.1, HALF_PI], [0.3, 0.1, -HALF_PI], [-0.7, 0.5, HALF_PI]])
    v = vector_field(p, 5.0)
    #no shear on the transverse faces
    assert np.allclose(v[:, 1], 0.0)
    assert np.all(v[:, 0] == 0.0)


def test_transit_time_closed_form():
    assert transit_time(0.0) == pytest.approx(np.pi)
    assert transit_time(np.pi / 3) == pytest.approx(2 * np.pi)
    with pytest.raises(BlockDomainError):
        transit_time(HALF_PI)


def test_exit_shear_is_odd_and_vanishes_at_core():
    xs = np.linspace(-1.4, 1.4, 29)
    assert exit_shear(0.0, 3.0) == 0.0
    assert np.allclose(exit_shear(-xs, 3.0), -exit_shear(xs, 3.0))


def test_exit_shear_derivative_bounded_below():
    lam = 7.0
    xs = np.linspace(-1.5, 1.5, 301)
    assert np.all(exit_shear_derivative(xs, lam) >= lam * np.pi / 2 - 1e-12)


def test_exit_shear_derivative_matches_symbolic():
    assert closed_form_matches_symbolic(np.linspace(-1.2, 1.2, 41), 3.0) < 1e-9


def test_inverse_exit_map_undoes_exit_map():
    xs = np.linspace(-1.3, 1.3, 11)
    ys = np.linspace(0.0, 0.9, 11)
    x1, y1 = exit_map(xs, ys, 50.0)
    x2, y2 = inverse_exit_map(x1, y1, 50.0)
    assert np.array_equal(x2, xs)
    assert np.all(circle_distance(y2, ys) < 1e-9)


def test_integrated_transit_matches_closed_form():
    lam = 1.0
    xs = np.array([0.0, 0.3, -0.5, 1.0])
    batch = transit_batch(xs, lam)
    assert batch.exited.all()
    np.testing.assert_allclose(batch.times, transit_time(xs), rtol=1e-7)
    expected = np.mod(exit_shear(xs, lam), 1.0)
    assert np.all(circle_distance(batch.exit_y, expected) < 1e-6)


def test_single_orbit_exits_at_closed_form_point():
    lam = 2.0
    trajectory = integrate_orbit(BlockPoint(0.3, 0.1, -HALF_PI), lam)
    assert trajectory.exited
    assert trajectory.exit_face == 'F1'
    assert trajectory.exit_time == pytest.approx(float(transit_time(0.3)), rel=1e-7)
    x, y = trajectory.exit_point
    assert x == 0.3
    assert circle_distance(y, (0.1 + exit_shear(0.3, lam)) % 1.0) < 1e-6
    rows = list(trajectory.rows())
    assert rows[0] == (0.0, 0.3, pytest.approx(0.1), -HALF_PI)
    assert all(0.0 <= r[2] < 1.0 for r in rows)


def test_orbit_on_tangential_wall_never_exits():
    trajectory = integrate_orbit(BlockPoint(HALF_PI, 0.0, -HALF_PI), 5.0, time_budget=5.0)
    assert not trajectory.exited
    assert trajectory.exit_time is None
    assert trajectory.exit_point is None
    #z creeps towards the periodic orbit at z = 0
    assert -0.5 < trajectory.states[-1, 2] < 0.0


def test_orbit_starting_on_exit_face_exits_immediately():
    trajectory = integrate_orbit(BlockPoint(0.0, 0.5, HALF_PI), 1.0)
    assert trajectory.exited
    assert trajectory.exit_time == 0.0


def test_integration_step_must_be_positive():
    with pytest.raises(BlockDomainError):
        integrate_orbit(BlockPoint(0.0, 0.0, 0.0), 1.0, step=0.0)


def test_field_symmetries_hold():
    report = check_symmetries(50.0, sample_block_points(100, seed=0))
    assert report.samples == 100
    assert report.rotation_residual == 0.0
    assert report.passed()


@pytest.mark.parametrize('k,manifold', [(1, 'K x I'), (2, 'T2 x I'), (3, 'K x I'), (6, 'T2 x I')])
def test_quotient_block(k, manifold):
    block = quotient_block(k)
    assert block.manifold == manifold
    assert block.one_prong_orbits == k


def test_quotient_block_rejects_zero():
    with pytest.raises(BlockDomainError):
        quotient_block(0)
