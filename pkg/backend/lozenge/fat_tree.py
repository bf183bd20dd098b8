import csv
import io
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import networkx as nx

from blueprint.conditions import validate_conditions
from blueprint.fat_graph import FORWARD, FatGraphBlueprint, Polarity, trace_boundary_cycles
from config import FAT_TREE_RADIUS

logger = logging.getLogger(__name__)

Word = Tuple[str, ...]  # reduced sequence of departure half-edges


class LozengeError(ValueError):
    pass


@dataclass(frozen=True)
class FatTreeVertex:
    word: Word
    base: str

    @property
    def depth(self) -> int:
        return len(self.word)


@dataclass(frozen=True)
class FatTreeEdge:
    parent: Word
    child: Word
    half_edge: str  # departure half-edge at the parent
    position: int  # its place in the parent's cyclic order


def sector_labels(bp: FatGraphBlueprint) -> Dict[str, Tuple[str, ...]]:
    """Label every sector (h_i, h_i+1) at each vertex 's' or 'u'.

    A sector is a corner of the boundary cycle through the state (h_i+1, +);
    incoming cycles give 's', outgoing ones 'u'.
    """
    cycles = trace_boundary_cycles(bp)
    report = validate_conditions(bp, cycles=cycles)
    if not report.passed:
        raise LozengeError("fat tree needs a blueprint satisfying both conditions: "
                           + ", ".join(report.codes()))
    polarity = {int(i): Polarity(p) for i, p in report.details['polarity'].items()}
    owner = {}
    for cycle in cycles:
        for state in cycle.states:
            owner[state] = cycle.index
            owner[bp.reverse_state(state)] = cycle.index

    labels: Dict[str, Tuple[str, ...]] = {}
    for vertex in bp.vertices:
        row = []
        for i in range(vertex.valence):
            after = vertex.half_edges[(i + 1) % vertex.valence]
            face = owner[(after, FORWARD)]
            row.append('s' if polarity[face] is Polarity.INCOMING else 'u')
        for i in range(len(row)):
            if row[i] == row[(i + 1) % len(row)]:
                raise LozengeError(f"sector labels at {vertex.id} do not alternate: {''.join(row)}")
        labels[vertex.id] = tuple(row)
    return labels


class FatTreePatch:
    def __init__(self, bp: FatGraphBlueprint, radius: int, root: str,
                 vertices: Dict[Word, FatTreeVertex], edges: List[FatTreeEdge],
                 labels: Dict[str, Tuple[str, ...]]):
        self.bp = bp
        self.radius = radius
        self.root = root
        self.vertices = vertices
        self.edges = edges
        self.labels = labels
        self.graph = nx.Graph()
        self.graph.add_nodes_from(vertices)
        self.graph.add_edges_from((e.parent, e.child, {'half_edge': e.half_edge}) for e in edges)
        self.logger = logging.getLogger(f"{__name__}.FatTreePatch")

    def __contains__(self, word: Word) -> bool:
        return tuple(word) in self.vertices

    def base_of(self, word: Word) -> str:
        return self.vertices[tuple(word)].base

    def is_tree(self) -> bool:
        return nx.is_tree(self.graph)

    def neighbours(self, word: Word) -> List[Tuple[str, Optional[Word]]]:
        #(half-edge, neighbour) in the cyclic order of the base vertex; None outside the patch
        word = tuple(word)
        out = []
        for half in self.bp.vertex(self.base_of(word)).half_edges:
            other = _step(self.bp, word, half)
            out.append((half, other if other in self.vertices else None))
        return out

    def position_towards(self, word: Word, other: Word) -> int:
        for i, (_, neighbour) in enumerate(self.neighbours(word)):
            if neighbour == tuple(other):
                return i
        raise LozengeError(f"{vertex_name(self, other)} is not adjacent to {vertex_name(self, word)}")

    def path(self, start: Word, end: Word) -> List[Word]:
        return nx.shortest_path(self.graph, tuple(start), tuple(end))


def _step(bp: FatGraphBlueprint, word: Word, half: str) -> Word:
    if word and half == bp.alpha(word[-1]):
        return word[:-1]
    return word + (half,)


def reduce_word(bp: FatGraphBlueprint, word: Word) -> Word:
    stack: List[str] = []
    for half in word:
        if stack and half == bp.alpha(stack[-1]):
            stack.pop()
        else:
            stack.append(half)
    return tuple(stack)


def build_fat_tree(bp: FatGraphBlueprint, radius: int = FAT_TREE_RADIUS) -> FatTreePatch:
    if radius < 0:
        raise LozengeError(f"radius must be nonnegative, got {radius}")
    labels = sector_labels(bp)
    root = bp.vertices[0].id
    vertices: Dict[Word, FatTreeVertex] = {(): FatTreeVertex((), root)}
    edges: List[FatTreeEdge] = []
    frontier: List[Word] = [()]
    for _ in range(radius):
        nxt: List[Word] = []
        for word in frontier:
            base = vertices[word].base
            for position, half in enumerate(bp.vertex(base).half_edges):
                if word and half == bp.alpha(word[-1]):
                    continue
                child = word + (half,)
                vertices[child] = FatTreeVertex(child, bp.vertex_of(bp.alpha(half)))
                edges.append(FatTreeEdge(word, child, half, position))
                nxt.append(child)
        frontier = nxt
    patch = FatTreePatch(bp, radius, root, vertices, edges, labels)
    logger.info(f"Fat tree patch of radius {radius}: {len(vertices)} vertices")
    return patch


def deck_translate(patch: FatTreePatch, loop: Word, word: Word) -> Word:
    """Act on a lifted vertex by a reduced loop at the root's base vertex."""
    bp = patch.bp
    loop = reduce_word(bp, tuple(loop))
    if loop:
        if bp.vertex_of(loop[0]) != patch.root or bp.vertex_of(bp.alpha(loop[-1])) != patch.root:
            raise LozengeError(f"word {'.'.join(loop)} is not a loop at {patch.root}")
        for prev, half in zip(loop, loop[1:]):
            if bp.vertex_of(bp.alpha(prev)) != bp.vertex_of(half):
                raise LozengeError(f"word {'.'.join(loop)} is not a path in the blueprint")
    return reduce_word(bp, loop + tuple(word))


def vertex_name(patch: FatTreePatch, word: Word) -> str:
    word = tuple(word)
    base = patch.base_of(word) if word in patch.vertices else patch.bp.vertex_of(patch.bp.alpha(word[-1]))
    return f"{base}[{'.'.join(word)}]"


def export_fat_tree(patch: FatTreePatch) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(['parent', 'child', 'half_edge', 'cyclic_order'])
    for edge in patch.edges:
        order = ' '.join(patch.bp.vertex(patch.base_of(edge.parent)).half_edges)
        writer.writerow([vertex_name(patch, edge.parent), vertex_name(patch, edge.child),
                         edge.half_edge, f"{edge.position}:{order}"])
    return buffer.getvalue()
