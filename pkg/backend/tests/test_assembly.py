import math

import pytest

from assembly.manifold import AssemblyError, Seam, SurfaceClass, assemble, seam_flip_composition
from blueprint.catalogue import circle_blueprint, figure_eight_blueprint
from blueprint.fat_graph import Polarity


def test_circle_assembles_into_two_tori(circle):
    asm = assemble(circle)
    assert sorted(asm.components) == [0, 1]
    incoming, outgoing = asm.component(0), asm.component(1)
    assert incoming.polarity is Polarity.INCOMING
    assert outgoing.polarity is Polarity.OUTGOING
    assert incoming.k == outgoing.k == 2
    assert incoming.is_torus and outgoing.is_torus
    assert asm.orientable


def test_every_block_has_one_incoming_and_one_outgoing_face(circle):
    asm = assemble(circle)
    assert sorted(asm.blocks) == ['e1', 'e2']
    for record in asm.blocks.values():
        assert record.incoming[0] == 0
        assert record.outgoing[0] == 1


@pytest.mark.parametrize('make', [lambda: circle_blueprint(2), lambda: circle_blueprint(4),
                                  lambda: figure_eight_blueprint(twisted=True)])
def test_half_walls_used_exactly_once(make):
    bp = make()
    census = assemble(bp).half_wall_census()
    assert census['reused'] == 0
    assert census['unused'] == 0
    assert census['stable'] + census['unstable'] == 4 * len(bp.edges)


def test_theta_half_walls_and_vertical_orbits(theta6):
    asm = assemble(theta6)
    census = asm.half_wall_census()
    assert census['stable'] + census['unstable'] == 24
    assert [(o.vertex, o.p) for o in asm.vertical_orbits] == [('v', 3), ('w', 3)]
    assert [c.index for c in asm.incoming()] == [0, 2, 4]


def test_odd_circle_gives_klein_bottles():
    asm = assemble(circle_blueprint(3))
    assert all(c.surface_class is SurfaceClass.KLEIN_BOTTLE for c in asm.components.values())
    assert not asm.orientable


def test_rejected_blueprint_carries_report():
    with pytest.raises(AssemblyError) as info:
        assemble(figure_eight_blueprint(twisted=False))
    assert info.value.report is not None
    assert info.value.report.has('not_bipartite')


def test_chart_round_trip(circle):
    component = assemble(circle).component(0)
    hit = component.global_to_chart(3 * math.pi / 2, 0.3)
    assert hit.j == 1
    assert hit.x == pytest.approx(0.0, abs=1e-12)
    assert hit.y == pytest.approx(0.7)
    assert not hit.on_seam
    u, v = component.chart_to_global(1, 0.0, 0.7)
    assert u == pytest.approx(3 * math.pi / 2)
    assert v == pytest.approx(0.3)


def test_seam_point_has_both_charts(circle):
    component = assemble(circle).component(0)
    hit = component.global_to_chart(math.pi, 0.2)
    assert hit.on_seam
    assert (hit.j, hit.x, hit.y) == (1, pytest.approx(-math.pi / 2), pytest.approx(0.8))
    left = hit.alternate
    assert (left.j, left.x, left.y) == (0, pytest.approx(math.pi / 2), pytest.approx(0.2))


def test_chart_index_out_of_range(circle):
    component = assemble(circle).component(0)
    with pytest.raises(ValueError):
        component.chart_to_global(2, 0.0, 0.0)
    with pytest.raises(ValueError):
        component.chart_to_global(0, 2.0, 0.0)


def test_tangent_circles_sit_on_seams(circle):
    asm = assemble(circle)
    stable = asm.component(0).tangent_circles()
    assert [c.u for c in stable] == [0.0, math.pi]
    assert {c.kind for c in stable} == {'stable'}
    assert {c.kind for c in asm.component(1).tangent_circles()} == {'unstable'}


@pytest.mark.parametrize('k', [1, 2, 3, 4, 5, 6])
def test_seam_flips_compose_to_identity_iff_k_even(k):
    asm = assemble(circle_blueprint(k))
    for component in asm.components.values():
        height = seam_flip_composition(asm, component.index, 0.2)
        assert height == pytest.approx(0.2 if k % 2 == 0 else 0.8)


def test_seam_flips_through_a_reflected_chart(figure_eight):
    asm = assemble(figure_eight)
    outgoing = asm.outgoing()[0]
    assert [c.reflected for c in outgoing.charts] == [False, True]
    #the reflected chart leaves through the block's -pi/2 wall
    assert [s.left for s in asm.seams if s.component == outgoing.index][0] == (outgoing.charts[1].edge, -1)
    assert seam_flip_composition(asm, outgoing.index, 0.3) == pytest.approx(0.3)


def test_seam_flip_detects_a_miswired_seam(circle):
    asm = assemble(circle)
    seam = asm.seams[1]
    asm.seams[1] = Seam(seam.component, seam.j, seam.vertex, seam.half, (seam.left[0], -seam.left[1]), seam.right)
    with pytest.raises(AssemblyError, match='does not leave'):
        seam_flip_composition(asm, seam.component, 0.2)


def test_report_lines(circle):
    lines = assemble(circle).report_lines()
    assert lines[0].startswith('component 0 polarity=incoming k=2 class=torus')
    assert 'vertical_orbit v1 p=1' in lines
    assert lines[-1] == 'orientable=yes'
