import numpy as np
import pytest

from nhtree.presentation import PresentationError, TreeAutomorphism, parse_automorphism, parse_presentation
from nhtree.queries import (AxisPreconditionError, axis, block, classical_translation_axis,
                            components_minus_point, distance, fix_sets, nonseparated, prongs)
from conftest import LADDER_TEXT, PERIODIC_LADDER_TEXT, PERIODIC_TRIPOD_TEXT

BRANCH_TEXT = """\
point a b c
segment s: c a
nonsep a b via s
"""


def _stem(point):
    return point.rpartition('@')[0]


def test_ladder_is_valid():
    tree = parse_presentation(LADDER_TEXT)
    assert tree.window is None
    assert not tree.hausdorff
    assert tree.incidence.number_of_nodes() == 8


def test_ladder_block_and_distance():
    tree = parse_presentation(LADDER_TEXT)
    result = block(tree, 'x0', 'y1')
    assert result.components == [('x0', 'y0'), ('x1', 'y1')]
    assert result.distance == 1
    assert distance(tree, 'x0', 'y0') == 0


def test_nonseparated_pairs():
    tree = parse_presentation(LADDER_TEXT)
    assert nonseparated(tree, 'y0', 'x1')
    assert not nonseparated(tree, 'x0', 'y1')
    assert not nonseparated(tree, 'y0', 'y0')


def test_prongs_at_branch_point():
    tree = parse_presentation(LADDER_TEXT)
    assert prongs(tree, 'y0') == [('x0', 'y0'), ('y0', 'z0')]
    assert components_minus_point(tree, 'y0') == [['x0'], ['x1', 'y1', 'z0']]
    with pytest.raises(PresentationError):
        prongs(tree, 'nowhere')


@pytest.mark.parametrize('text,message', [
    ("point a b\nsegment s: a c\n", "undefined point c"),
    ("point a b c\nsegment s: a b\nsegment t: b c\nsegment u: c a\n", "separation axiom"),
    ("point a b c\nsegment s: a b\nnonsep a a via s\n", "itself"),
    ("point a b c\nsegment s: a b c\nsegment t: a c\n", "overlap inconsistently"),
    ("point a b c\nsegment s: a b\nnonsep b c via t\n", "unknown segment"),
    ("point a b c\nsegment s: a b\nsegment t: b c\nnonsep b a via s\n", "already lies"),
    ("point a b\nsegment s: a b@1\n", "periodic"),
    ("point a b\nsegment s: a b\nlink a b\n", "unknown directive"),
])
def test_invalid_presentations(text, message):
    with pytest.raises(PresentationError, match=message):
        parse_presentation(text)


def test_disconnected_presentation_rejected():
    with pytest.raises(PresentationError, match="arcwise connected"):
        parse_presentation("point a b c d\nsegment s: a b\nsegment t: c d\n")


def test_branch_swap_fix_sets():
    tree = parse_presentation(BRANCH_TEXT)
    swap = parse_automorphism("map a b\nmap b a\n", tree, 'swap')
    fixes = fix_sets(tree, swap)
    assert fixes.fixed == {'c'}
    assert fixes.fixed_tilde == {'a', 'b', 'c'}
    with pytest.raises(AxisPreconditionError):
        axis(tree, swap)


def test_map_that_breaks_an_edge_is_not_an_automorphism():
    tree = parse_presentation(LADDER_TEXT)
    with pytest.raises(PresentationError):
        parse_automorphism("map x0 z0\nmap z0 x0\n", tree)


def test_automorphism_must_be_injective():
    with pytest.raises(PresentationError):
        TreeAutomorphism({'a': 'c', 'b': 'c'})


def test_periodic_ladder_unrolls_over_window():
    tree = parse_presentation(PERIODIC_LADDER_TEXT, window=3)
    assert tree.window == 3
    assert len(tree.points) == 3 * 7
    assert tree.shift('x@0') == 'x@1'
    assert tree.shift('x@3') is None
    assert tree.shift.power('y@-3', 4) == 'y@1'
    assert nonseparated(tree, 'y@0', 'x@1')


def test_periodic_ladder_axis():
    tree = parse_presentation(PERIODIC_LADDER_TEXT)
    fixes = fix_sets(tree, tree.shift)
    assert not fixes.fixed
    assert not fixes.fixed_tilde
    result = axis(tree, tree.shift)
    assert result.passed
    assert {'x@0', 'y@0', 'x@1', 'y@1'} <= result.points
    assert {_stem(p) for p in result.points} == {'x', 'y'}


def test_periodic_tripod_axis_matches_distance_oracle():
    tree = parse_presentation(PERIODIC_TRIPOD_TEXT)
    result = axis(tree, tree.shift)
    assert result.passed
    assert {_stem(p) for p in result.points} == {'p'}
    length, classical = classical_translation_axis(tree, tree.shift)
    assert length == 1
    assert result.points == classical & result.evaluated


def test_distance_oracle_needs_a_hausdorff_tree():
    tree = parse_presentation(PERIODIC_LADDER_TEXT)
    with pytest.raises(PresentationError):
        classical_translation_axis(tree, tree.shift)


def _random_periodic_tree(rng, size):
    lines = ["point " + " ".join(f"n{i}" for i in range(size))]
    for i in range(1, size):
        lines.append(f"segment t{i}: n{int(rng.integers(i))} n{i}")
    a, b = (int(v) for v in rng.integers(size, size=2))
    lines.append(f"segment spine: n{a} n{b}@1")
    lines.append("periodic shift:")
    return "\n".join(lines) + "\n"


@pytest.mark.parametrize('seed', range(6))
def test_axis_agrees_with_distance_oracle_on_simplicial_trees(seed):
    rng = np.random.default_rng(seed)
    tree = parse_presentation(_random_periodic_tree(rng, int(rng.integers(2, 7))), window=3)
    result = axis(tree, tree.shift)
    length, classical = classical_translation_axis(tree, tree.shift)
    assert length >= 1
    assert result.points == classical & result.evaluated
    assert result.passed
