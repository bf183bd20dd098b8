import pytest

from blueprint.catalogue import (CIRCLE_TEXT, FIGURE_EIGHT_TEXT, circle_blueprint, figure_eight_blueprint,
                                 theta_blueprint)
from blueprint.conditions import (ProngClass, derive_polarity, euler_characteristic, prong_census,
                                  validate_conditions)
from blueprint.fat_graph import (BlueprintError, Edge, FatGraphBlueprint, Polarity, Side, Vertex,
                                 trace_boundary_cycles)
from blueprint.parser import format_blueprint, parse_blueprint


def test_parse_circle_gives_two_cycles_of_length_two():
    bp = parse_blueprint(CIRCLE_TEXT)
    cycles = trace_boundary_cycles(bp)
    assert [c.length for c in cycles] == [2, 2]
    assert [c.describe() for c in cycles] == ['e1+ e2+', 'e1- e2-']


def test_parse_figure_eight_accepted():
    bp = parse_blueprint(FIGURE_EIGHT_TEXT)
    assert bp.valences() == {'v': 4}
    cycles = trace_boundary_cycles(bp)
    assert [c.describe() for c in cycles] == ['a+ b-', 'a- b+']


def test_undefined_half_edge_reports_identifier_and_line():
    text = "vertex v1: a1 b1\nedge e1: a1 zz\n"
    with pytest.raises(BlueprintError) as info:
        parse_blueprint(text)
    assert 'zz' in str(info.value)
    assert info.value.line == 2


def test_duplicate_identifier_rejected():
    text = "vertex v1: a1 b1\nvertex v2: a1 b2\n"
    with pytest.raises(BlueprintError) as info:
        parse_blueprint(text)
    assert info.value.line == 2
    assert "duplicate identifier 'a1'" in str(info.value)


def test_dangling_half_edge_rejected():
    with pytest.raises(BlueprintError, match="dangling half-edge 'b1'"):
        parse_blueprint("vertex v1: a1 b1 c1 d1\nedge e1: a1 c1\n")


def test_unknown_directive_rejected():
    with pytest.raises(BlueprintError, match="unknown directive 'node'"):
        parse_blueprint("node v1: a b\n")


def test_format_round_trips():
    bp = parse_blueprint(FIGURE_EIGHT_TEXT)
    again = parse_blueprint(format_blueprint(bp))
    assert format_blueprint(again) == format_blueprint(bp)
    assert [e.twisted for e in again.edges] == [True, True]


def test_single_loop_gives_two_cycles_of_length_one():
    cycles = trace_boundary_cycles(circle_blueprint(1))
    assert [c.length for c in cycles] == [1, 1]


@pytest.mark.parametrize('k', [1, 2, 3, 4, 5, 6])
def test_circle_blueprint_is_an_annulus(k):
    bp = circle_blueprint(k)
    cycles = trace_boundary_cycles(bp)
    assert [c.length for c in cycles] == [k, k]
    assert sum(c.length for c in cycles) == 2 * len(bp.edges)
    euler = euler_characteristic(bp, cycles)
    assert euler.chi_surface == 0
    assert euler.orientable


def test_twisting_one_edge_changes_cycle_count_by_one():
    plain = circle_blueprint(2)
    twisted = FatGraphBlueprint(plain.vertices, (Edge('e1', 'a1', 'b2', twisted=True), plain.edges[1]))
    assert len(trace_boundary_cycles(plain)) == 2
    assert len(trace_boundary_cycles(twisted)) == 1


def test_circle_conditions_pass_with_derived_polarity(circle):
    report = validate_conditions(circle)
    assert report.passed
    assert report.details['bipartite']
    assert report.details['polarity_source'] == 'derived'
    assert report.details['polarity'] == {0: 'incoming', 1: 'outgoing'}


def test_odd_valence_names_vertex():
    bp = FatGraphBlueprint((Vertex('v', ('a', 'b', 'c')), Vertex('w', ('d', 'e', 'f'))),
                           (Edge('e1', 'a', 'd'), Edge('e2', 'b', 'e'), Edge('e3', 'c', 'f')))
    report = validate_conditions(bp)
    assert not report.passed
    subjects = [v.subject for v in report.violations if v.code == 'condition_I']
    assert subjects == ['v', 'w']


def test_same_polarity_sides_violate_condition_two(circle):
    declared = {0: Polarity.INCOMING, 1: Polarity.INCOMING}
    report = validate_conditions(circle, declared)
    assert [v.subject for v in report.violations if v.code == 'condition_II'] == ['e1', 'e2']


def test_untwisted_figure_eight_is_not_bipartite():
    bp = figure_eight_blueprint(twisted=False)
    cycles = trace_boundary_cycles(bp)
    assert len(cycles) == 1
    report = validate_conditions(bp, cycles=cycles)
    assert report.has('not_bipartite')
    assert derive_polarity(bp, cycles) is None


def test_twisted_figure_eight_is_a_punctured_mobius_band(figure_eight):
    euler = euler_characteristic(figure_eight)
    assert (euler.vertices, euler.edges, euler.boundary_cycles) == (1, 2, 2)
    assert euler.chi_surface == -1
    assert not euler.orientable
    assert validate_conditions(figure_eight).passed


def test_prong_census_classes(circle, figure_eight, theta6):
    assert {(c.p, c.kind) for c in prong_census(circle)} == {(1, ProngClass.ONE_PRONG)}
    assert [(c.p, c.kind) for c in prong_census(figure_eight)] == [(2, ProngClass.REGULAR)]
    assert [(c.p, c.kind) for c in prong_census(theta6)] == [(3, ProngClass.SINGULAR)] * 2


def test_prong_census_rejects_odd_valence():
    with pytest.raises(BlueprintError):
        prong_census(theta_blueprint(3))


def test_theta_polarity_alternates_around_the_faces():
    bp = theta_blueprint(4)
    cycles = trace_boundary_cycles(bp)
    assert [c.describe() for c in cycles] == ['e1+ e4-', 'e1- e2+', 'e2- e3+', 'e3- e4+']
    polarity = derive_polarity(bp, cycles)
    assert [polarity[i] for i in range(4)] == [Polarity.INCOMING, Polarity.OUTGOING] * 2


def test_sides_sort_plus_before_minus():
    assert Side('e1', '+') < Side('e1', '-') < Side('e2', '+')
