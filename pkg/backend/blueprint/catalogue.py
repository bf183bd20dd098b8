from typing import List

from blueprint.fat_graph import Edge, FatGraphBlueprint, Vertex


def circle_blueprint(k: int) -> FatGraphBlueprint:
    #k valence-2 vertices on a cycle; the ribbon surface is an annulus
    if k < 1:
        raise ValueError("circle blueprint needs at least one vertex")
    if k == 1:
        return FatGraphBlueprint((Vertex('v1', ('a1', 'b1')),), (Edge('e1', 'a1', 'b1'),))
    vertices = [Vertex(f'v{i}', (f'a{i}', f'b{i}')) for i in range(1, k + 1)]
    edges = [Edge(f'e{i}', f'a{i}', f'b{i % k + 1}') for i in range(1, k + 1)]
    return FatGraphBlueprint(tuple(vertices), tuple(edges))


def figure_eight_blueprint(twisted: bool = True) -> FatGraphBlueprint:
    """One valence-4 vertex with two loops in cyclic order (a+, b+, a-, b-).

    With both loops twisted the ribbon surface is a punctured Mobius band with two
    boundary cycles of length 2; untwisted it has a single boundary cycle.
    """
    vertex = Vertex('v', ('a+', 'b+', 'a-', 'b-'))
    edges = (Edge('a', 'a+', 'a-', twisted), Edge('b', 'b+', 'b-', twisted))
    return FatGraphBlueprint((vertex,), edges)


def theta_blueprint(n: int) -> FatGraphBlueprint:
    #two vertices of valence n joined by n parallel edges, planar cyclic orders
    if n < 2:
        raise ValueError("theta blueprint needs at least two edges")
    left = Vertex('v', tuple(f'v{i}' for i in range(1, n + 1)))
    right = Vertex('w', tuple(f'w{i}' for i in range(n, 0, -1)))
    edges: List[Edge] = [Edge(f'e{i}', f'v{i}', f'w{i}') for i in range(1, n + 1)]
    return FatGraphBlueprint((left, right), tuple(edges))


CIRCLE_TEXT = """\
# two valence-2 vertices on a circle
vertex v1: a1 b1
vertex v2: a2 b2
edge e1: a1 b2
edge e2: a2 b1
"""

FIGURE_EIGHT_TEXT = """\
# one valence-4 vertex, both loops twisted
vertex v: a+ b+ a- b-
edge a: a+ a- twist
edge b: b+ b- twist
"""
