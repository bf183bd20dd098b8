import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

import networkx as nx

from nhtree.presentation import (EdgeKey, NHTree, Node, PresentationError, TreeAutomorphism, edge_node,
                                 point_node)

logger = logging.getLogger(__name__)


class AxisPreconditionError(ValueError):
    pass


def prongs(tree: NHTree, x: str) -> List[EdgeKey]:
    tree.require_point(x)
    return tree.edges_of(x)


def components_minus_point(tree: NHTree, x: str) -> List[List[str]]:
    """Points left in each component once x is removed; one component per prong."""
    tree.require_point(x)
    graph = tree.incidence.copy()
    graph.remove_node(point_node(x))
    parts = []
    for component in nx.connected_components(graph):
        parts.append(sorted(n[1] for n in component if n[0] == 'point'))
    return sorted(parts)


def nonseparated(tree: NHTree, a: str, b: str) -> bool:
    tree.require_point(a)
    tree.require_point(b)
    if a == b:
        return False
    return any(a in end and b in end for ends in tree.end_sets.values() for end in ends)


def _path(tree: NHTree, start: Node, end: Node) -> List[Node]:
    return nx.shortest_path(tree.incidence, start, end)


def _crosses(tree: NHTree, path: List[Node], i: int) -> bool:
    #an edge node on a path is crossed when it is entered and left through different ends
    key = path[i][1]
    return tree.end_of(key, path[i - 1][1]) != tree.end_of(key, path[i + 1][1])


@dataclass
class Block:
    x: str
    y: str
    components: List[Tuple[str, ...]]

    @property
    def distance(self) -> int:
        return len(self.components) - 1

    @property
    def points(self) -> Set[str]:
        return {p for component in self.components for p in component}


def block(tree: NHTree, x: str, y: str) -> Block:
    """Split [x, y] into maximal closed segments whose consecutive ends are non-separated."""
    tree.require_point(x)
    tree.require_point(y)
    path = _path(tree, point_node(x), point_node(y))
    components: List[List[str]] = [[x]]
    for i in range(1, len(path) - 1, 2):
        nxt = path[i + 1][1]
        if _crosses(tree, path, i):
            components[-1].append(nxt)
        else:
            components.append([nxt])
    return Block(x, y, [tuple(c) for c in components])


def distance(tree: NHTree, x: str, y: str) -> int:
    return block(tree, x, y).distance


@dataclass
class FixSets:
    fixed: Set[str]
    fixed_tilde: Set[str]
    fixed_edges: Set[EdgeKey]


def _edge_image(tree: NHTree, gamma: TreeAutomorphism, key: EdgeKey,
                by_signature: Dict[FrozenSet[FrozenSet[str]], EdgeKey]) -> Optional[EdgeKey]:
    images = [frozenset(gamma(p) for p in end) for end in tree.end_sets[key]]
    if any(None in image for image in images):
        return None
    return by_signature.get(frozenset(images))


def _signatures(tree: NHTree) -> Dict[FrozenSet[FrozenSet[str]], EdgeKey]:
    return {tree.edge_signature(k): k for k in tree.end_sets}


def fix_sets(tree: NHTree, gamma: TreeAutomorphism) -> FixSets:
    fixed = {p for p in tree.points if gamma(p) == p}
    tilde = set(fixed)
    for p in tree.points:
        q = gamma(p)
        if q is not None and q != p and nonseparated(tree, p, q):
            tilde.add(p)
    signatures = _signatures(tree)
    fixed_edges = {k for k in tree.end_sets if _edge_image(tree, gamma, k, signatures) == k}
    return FixSets(fixed, tilde, fixed_edges)


@dataclass
class AxisResult:
    window: Optional[int]
    points: Set[str]
    edges: Set[EdgeKey]
    evaluated: Set[str]  # points whose first two images lie in the presentation
    inconclusive: bool = False
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.inconclusive and all(self.checks.values())


def _raw_axis(tree: NHTree, gamma: TreeAutomorphism) -> Tuple[Set[str], Set[EdgeKey], Set[str], Set[EdgeKey]]:
    points, evaluated = set(), set()
    for x in tree.points:
        gx = gamma(x)
        ggx = gamma(gx)
        if gx is None or ggx is None:
            continue
        evaluated.add(x)
        if point_node(gx) in _path(tree, point_node(x), point_node(ggx)):
            points.add(x)

    signatures = _signatures(tree)
    edges, edges_evaluated = set(), set()
    for key in tree.end_sets:
        ge = _edge_image(tree, gamma, key, signatures)
        gge = _edge_image(tree, gamma, ge, signatures) if ge is not None else None
        if ge is None or gge is None:
            continue
        edges_evaluated.add(key)
        path = _path(tree, edge_node(key), edge_node(gge))
        node = edge_node(ge)
        if node in path and _crosses(tree, path, path.index(node)):
            edges.add(key)
    return points, edges, evaluated, edges_evaluated


def axis(tree: NHTree, gamma: TreeAutomorphism) -> AxisResult:
    """Points x of the presentation with gamma(x) in [x, gamma^2(x)], plus open edges likewise."""
    fixes = fix_sets(tree, gamma)
    if fixes.fixed or fixes.fixed_edges:
        raise AxisPreconditionError(f"{gamma.name} fixes {sorted(fixes.fixed)[:3]} "
                                    f"and {len(fixes.fixed_edges)} edges in the window")
    points, edges, evaluated, edges_evaluated = _raw_axis(tree, gamma)
    inverse = gamma.inverse()
    inv_points, inv_edges, inv_evaluated, inv_edges_evaluated = _raw_axis(tree, inverse)

    common = evaluated & inv_evaluated
    common_edges = edges_evaluated & inv_edges_evaluated
    checks = {
        'symmetric': (points & common) == (inv_points & common) and (edges & common_edges) == (inv_edges & common_edges),
        'invariant': all(gamma(x) in points for x in points if gamma(x) in evaluated)
        and all(inverse(x) in points for x in points if inverse(x) in evaluated),
        'union_formula': _union_formula_holds(tree, gamma, points, evaluated),
    }
    inconclusive = not points
    if inconclusive:
        logger.warning(f"Axis of {gamma.name} is empty on window {tree.window}; the window is too small to decide")
    result = AxisResult(tree.window, points, edges, evaluated, inconclusive, checks)
    logger.debug(f"Axis of {gamma.name}: {len(points)} points, {len(edges)} edges, checks {checks}")
    return result


def _union_formula_holds(tree: NHTree, gamma: TreeAutomorphism, points: Set[str], evaluated: Set[str]) -> bool:
    for x in points:
        for i in range(-2, 3):
            a = gamma.power(x, i)
            b = gamma.power(x, i + 1)
            if a is None or b is None:
                continue
            if any(p in evaluated and p not in points for p in block(tree, a, b).points):
                return False
    return True


def _simplicial_graph(tree: NHTree) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(tree.points)
    graph.add_edges_from(tree.end_sets)
    return graph


def classical_translation_axis(tree: NHTree, gamma: TreeAutomorphism) -> Tuple[int, Set[str]]:
    """Translation length and axis from graph distances; simplicial presentations only."""
    if not tree.hausdorff:
        raise PresentationError("the distance oracle needs a presentation without non-separated points")
    graph = _simplicial_graph(tree)
    length = None
    for x in tree.points:
        gx, ggx = gamma(x), gamma.power(x, 2)
        if gx is not None and ggx is not None:
            length = (nx.shortest_path_length(graph, x, ggx) - nx.shortest_path_length(graph, x, gx))
            break
    if length is None:
        raise AxisPreconditionError("no point has two images inside the window")
    on_axis = {v for v in tree.points
               if gamma(v) is not None and nx.shortest_path_length(graph, v, gamma(v)) == length}
    return length, on_axis
