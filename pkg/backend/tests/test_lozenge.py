import pytest

from blueprint.catalogue import figure_eight_blueprint
from lozenge.chains import ScallopKind, chain_along_path, is_scalloped, is_string
from lozenge.fat_tree import (LozengeError, build_fat_tree, deck_translate, export_fat_tree, reduce_word,
                              sector_labels)


@pytest.fixture
def patch(figure_eight):
    return build_fat_tree(figure_eight, 3)


def test_sector_labels_alternate(figure_eight):
    assert sector_labels(figure_eight) == {'v': ('u', 's', 'u', 's')}


def test_sector_labels_need_valid_blueprint():
    with pytest.raises(LozengeError):
        sector_labels(figure_eight_blueprint(twisted=False))


@pytest.mark.parametrize('radius,count', [(0, 1), (1, 5), (2, 17), (3, 53)])
def test_figure_eight_fat_tree_size(figure_eight, radius, count):
    patch = build_fat_tree(figure_eight, radius)
    assert len(patch.vertices) == count
    assert len(patch.edges) == count - 1
    assert patch.is_tree()


@pytest.mark.parametrize('radius', [0, 1, 4])
def test_circle_fat_tree_is_a_line(circle, radius):
    patch = build_fat_tree(circle, radius)
    assert len(patch.vertices) == 2 * radius + 1
    assert patch.is_tree()


def test_negative_radius_rejected(figure_eight):
    with pytest.raises(LozengeError):
        build_fat_tree(figure_eight, -1)


def test_neighbours_follow_cyclic_order(patch):
    neighbours = patch.neighbours(('a+',))
    assert [half for half, _ in neighbours] == ['a+', 'b+', 'a-', 'b-']
    assert dict(neighbours)['a-'] == ()
    assert dict(neighbours)['b+'] == ('a+', 'b+')


def test_reduce_word_cancels_backtracking(figure_eight):
    assert reduce_word(figure_eight, ('a+', 'a-', 'b+')) == ('b+',)
    assert reduce_word(figure_eight, ('a+', 'b+', 'b-', 'a-')) == ()


def test_deck_translation(patch):
    assert deck_translate(patch, ('a+',), ()) == ('a+',)
    assert deck_translate(patch, ('a+',), ('a-', 'b+')) == ('b+',)


def test_deck_translation_needs_a_loop(circle):
    patch = build_fat_tree(circle, 2)
    with pytest.raises(LozengeError):
        deck_translate(patch, ('a1',), ())


def test_export_lists_every_edge(patch):
    lines = export_fat_tree(patch).splitlines()
    assert lines[0] == 'parent,child,half_edge,cyclic_order'
    assert len(lines) == len(patch.edges) + 1
    assert lines[1].startswith('v[],v[a+],a+,0:')


def test_adjacent_along_unstable_sides_is_s_scalloped(patch):
    chain = chain_along_path(patch, [(), ('a+',), ('a+', 'b-'), ('a+', 'b-', 'a+')])
    assert len(chain) == 3
    assert [z.shared_side for z in chain.lozenges[1:]] == ['u', 'u']
    assert is_scalloped(chain) is ScallopKind.S_SCALLOPED


def test_adjacent_along_stable_sides_is_u_scalloped(patch):
    chain = chain_along_path(patch, [(), ('a+',), ('a+', 'b+'), ('a+', 'b+', 'a+')])
    assert is_scalloped(chain) is ScallopKind.U_SCALLOPED


def test_mixed_sides_are_not_scalloped(patch):
    chain = chain_along_path(patch, [(), ('a+',), ('a+', 'b-'), ('a+', 'b-', 'a-')])
    assert is_scalloped(chain) is ScallopKind.NEITHER


def test_opposite_sectors_make_a_string(patch):
    chain = chain_along_path(patch, [(), ('a+',), ('a+', 'a+')])
    assert not any(z.adjacent_to_previous for z in chain.lozenges)
    assert is_string(chain)
    assert [c.p for c in chain.corners] == [2, 2, 2]


def test_scalloped_needs_two_lozenges(patch):
    with pytest.raises(LozengeError):
        is_scalloped(chain_along_path(patch, [(), ('a+',)]))


@pytest.mark.parametrize('path', [[()], [(), ('a+', 'b+')], [(), ('a+',), ()]])
def test_bad_paths_rejected(patch, path):
    with pytest.raises(LozengeError):
        chain_along_path(patch, path)
