import math

import numpy as np
import pytest

from block_flow.model_block import HALF_PI
from config import CURVE_CLIP
from returnmap.return_system import ReturnMapError
from returnmap.stable_curves import (StableCurveFamily, density_probe, generation_zero, pull_back_family,
                                     stable_curves)


def test_generation_zero_lines(circle_system):
    family = generation_zero(circle_system)
    assert family.generation == 0
    assert len(family.curves) == 4
    assert family.counts_per_annulus() == {(1, 0): 2, (1, 1): 2}
    assert family.max_slope == pytest.approx(1 / (2 * math.pi))
    assert family.outside_cone(0.2)


def test_generation_zero_maps_onto_tangent_circles(circle_system):
    glue = circle_system.glue(1)
    for curve in generation_zero(circle_system).curves:
        u2, _ = glue.apply(curve.u, curve.v)
        #every point lands on a seam u' = n*pi
        assert np.allclose(np.mod(u2 + 0.5 * math.pi, math.pi), 0.5 * math.pi)


def test_pullbacks_reach_the_clip_window(circle_system):
    glue = circle_system.glue(1)
    edge = HALF_PI - CURVE_CLIP
    reach = 0.0
    for curve in stable_curves(circle_system, 1)[1].curves:
        u2, _ = glue.apply(curve.u, curve.v)
        x = np.mod(u2, math.pi) - HALF_PI
        reach = max(reach, float(np.max(np.abs(x))))
    #well past the one-turn band |a(x)| <= 1 around x = 0
    assert reach == pytest.approx(edge, abs=1e-6)


def test_duplicate_parents_are_merged(circle_system):
    family = generation_zero(circle_system)
    doubled = StableCurveFamily(0, family.curves + family.curves)
    once = pull_back_family(circle_system, family)
    twice = pull_back_family(circle_system, doubled)
    assert twice.generation == 1
    assert len(twice.curves) == len(once.curves)


def test_generations_grow_and_stay_outside_the_cone(circle_system):
    families = stable_curves(circle_system, 2)
    counts = [len(f.curves) for f in families]
    assert counts[0] == 4
    assert counts[0] < counts[1] < counts[2]
    for family in families:
        assert family.outside_cone(circle_system.kappa)


def test_pulled_back_curves_are_graphs_inside_their_annulus(circle_system):
    families = stable_curves(circle_system, 1)
    for curve in families[1].curves:
        assert curve.component == 1
        assert np.all(np.diff(curve.u) > 0)
        assert curve.u[0] >= curve.chart * math.pi - 1e-9
        assert curve.u[-1] <= (curve.chart + 1) * math.pi + 1e-9
        assert 0.0 <= curve.v[0] < 1.0


def test_generation_range_checked(circle_system):
    with pytest.raises(ReturnMapError):
        stable_curves(circle_system, 9)
    with pytest.raises(ReturnMapError):
        stable_curves(circle_system, -1)


def test_density_is_cumulative(circle_system):
    families = stable_curves(circle_system, 2)
    density = density_probe(circle_system, families)
    assert len(density.fractions) == 3
    assert all(0 < f <= 1 for f in density.fractions)
    assert density.fractions == sorted(density.fractions)
    assert density.fractions[2] > density.fractions[0]


def test_curve_rows_carry_generation(circle_system):
    family = generation_zero(circle_system, samples=5)
    rows = list(family.rows())
    assert len(rows) == 20
    assert {r[0] for r in rows} == {0}
    assert all(0.0 <= r[4] < 1.0 for r in rows)


def test_density_trends_to_full_cover(circle_system):
    density = density_probe(circle_system, stable_curves(circle_system, 2))
    assert density.fractions[0] < 0.2
    assert density.fractions[1] > 2 * density.fractions[0]
    assert density.fractions[-1] >= 0.8


def test_coarser_resolution_gives_fewer_curves(circle_system):
    fine = stable_curves(circle_system, 1, resolution=0.1)[1]
    coarse = stable_curves(circle_system, 1, resolution=0.4)[1]
    assert 0 < len(coarse.curves) < len(fine.curves)
