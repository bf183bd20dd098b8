from fractions import Fraction as F

import pytest

from lozenge.fat_tree import LozengeError
from lozenge.skew_model import (Connection, Leaf, SkewOrbit, bfs_chain_length, closed_form_connection, eta,
                                lozenge_corners, nu, parse_orbit, skew_chain_connected, skew_partner,
                                skew_partner_inverse)

BASE = SkewOrbit(F(1, 2), F(6, 5))


def test_orbit_must_lie_in_the_strip():
    with pytest.raises(LozengeError):
        SkewOrbit(1, F(1, 2))
    with pytest.raises(LozengeError):
        SkewOrbit(0, 1)


def test_perfect_fits():
    assert eta(Leaf.STABLE, F(3, 2)) == (Leaf.UNSTABLE, F(3, 2))
    assert eta(Leaf.UNSTABLE, F(3, 2)) == (Leaf.STABLE, F(5, 2))


def test_partner_and_inverse():
    partner = skew_partner(BASE)
    assert partner == SkewOrbit(F(6, 5), F(3, 2))
    assert skew_partner_inverse(partner) == BASE
    assert lozenge_corners(BASE) == (BASE, partner)


def test_projection_to_the_torus():
    assert nu(BASE) == (F(1, 5), F(1, 2))
    assert nu(BASE.shifted(3)) == nu(BASE)


@pytest.mark.parametrize('other,kind,length', [
    ('3/2,11/5', Connection.EVEN, 2),
    ('6/5,3/2', Connection.ODD, 1),
    ('5/2,16/5', Connection.EVEN, 4),
    ('1/3,6/5', Connection.NONE, None),
    ('1/2,6/5', Connection.EVEN, 0),
])
def test_chain_connectivity(other, kind, length):
    result = skew_chain_connected(BASE, parse_orbit(other))
    assert result.kind is kind
    assert result.length == length


def test_breadth_first_search_agrees_with_closed_form():
    orbits = [BASE.shifted(n) for n in range(-2, 3)] + [skew_partner(BASE).shifted(n) for n in range(-2, 3)]
    for other in orbits:
        expected = closed_form_connection(BASE, other)
        assert bfs_chain_length(BASE, other) == expected.length


def test_search_depth_limits_the_oracle():
    far = BASE.shifted(10)
    assert bfs_chain_length(BASE, far, depth=4) is None
    assert skew_chain_connected(BASE, far, depth=4).length == 20


def test_parse_orbit_errors():
    with pytest.raises(LozengeError):
        parse_orbit('1/2')
    with pytest.raises(LozengeError):
        parse_orbit('a,b')
    assert parse_orbit(' 1/2 , 6/5 ') == BASE
