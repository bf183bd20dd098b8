import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Set, Tuple

logger = logging.getLogger(__name__)

FORWARD = 1
BACKWARD = -1

#a face-tracing state: (half-edge departed from, rotation sense)
State = Tuple[str, int]


class BlueprintError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class Polarity(Enum):
    INCOMING = "incoming"
    OUTGOING = "outgoing"

    @property
    def opposite(self) -> 'Polarity':
        return Polarity.OUTGOING if self is Polarity.INCOMING else Polarity.INCOMING


@dataclass(frozen=True)
class Vertex:
    id: str
    half_edges: Tuple[str, ...]
    line: int = 0

    @property
    def valence(self) -> int:
        return len(self.half_edges)


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    twisted: bool = False
    line: int = 0

    @property
    def twist(self) -> int:
        return -1 if self.twisted else 1


@dataclass(frozen=True, order=True)
class Side:
    edge: str
    tag: str  # '+' or '-'

    def __str__(self) -> str:
        return f"{self.edge}{self.tag}"

    @property
    def other(self) -> 'Side':
        return Side(self.edge, '-' if self.tag == '+' else '+')


@dataclass(frozen=True)
class BoundaryCycle:
    index: int
    sides: Tuple[Side, ...]
    #the state each side is traversed with, in cycle order
    states: Tuple[State, ...]
    polarity: Optional[Polarity] = None

    @property
    def length(self) -> int:
        return len(self.sides)

    @property
    def smallest_side(self) -> Side:
        return min(self.sides)

    def with_polarity(self, polarity: Polarity) -> 'BoundaryCycle':
        return BoundaryCycle(self.index, self.sides, self.states, polarity)

    def describe(self) -> str:
        return " ".join(str(s) for s in self.sides)


@dataclass
class FatGraphBlueprint:
    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]
    polarity: Dict[int, Polarity] = field(default_factory=dict)
    labels: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = tuple(self.vertices)
        self.edges = tuple(self.edges)
        self._vertex_of: Dict[str, str] = {}
        self._position: Dict[str, int] = {}
        self._edge_of: Dict[str, Edge] = {}
        self._check_structure()

    def _check_structure(self) -> None:
        vertex_ids: Set[str] = set()
        for vertex in self.vertices:
            if vertex.id in vertex_ids:
                raise BlueprintError(f"duplicate vertex '{vertex.id}'", vertex.line)
            vertex_ids.add(vertex.id)
            if vertex.valence < 2:
                raise BlueprintError(f"vertex '{vertex.id}' has valence {vertex.valence} < 2", vertex.line)
            for i, half in enumerate(vertex.half_edges):
                if half in self._vertex_of:
                    raise BlueprintError(f"half-edge '{half}' appears in two cyclic orders", vertex.line)
                self._vertex_of[half] = vertex.id
                self._position[half] = i

        edge_ids: Set[str] = set()
        for edge in self.edges:
            if edge.id in edge_ids or edge.id in vertex_ids:
                raise BlueprintError(f"duplicate identifier '{edge.id}'", edge.line)
            edge_ids.add(edge.id)
            if edge.tail == edge.head:
                raise BlueprintError(f"edge '{edge.id}' pairs half-edge '{edge.tail}' with itself", edge.line)
            for half in (edge.tail, edge.head):
                if half not in self._vertex_of:
                    raise BlueprintError(f"edge '{edge.id}' references undefined half-edge '{half}'", edge.line)
                if half in self._edge_of:
                    raise BlueprintError(f"half-edge '{half}' paired twice", edge.line)
                self._edge_of[half] = edge

        dangling = sorted(set(self._vertex_of) - set(self._edge_of))
        if dangling:
            vertex = self.vertex(self._vertex_of[dangling[0]])
            raise BlueprintError(f"dangling half-edge '{dangling[0]}'", vertex.line)

    #fat structure accessors

    def vertex(self, vertex_id: str) -> Vertex:
        for vertex in self.vertices:
            if vertex.id == vertex_id:
                return vertex
        raise BlueprintError(f"unknown vertex '{vertex_id}'")

    def edge(self, edge_id: str) -> Edge:
        for edge in self.edges:
            if edge.id == edge_id:
                return edge
        raise BlueprintError(f"unknown edge '{edge_id}'")

    def vertex_of(self, half: str) -> str:
        return self._vertex_of[half]

    def edge_of(self, half: str) -> Edge:
        return self._edge_of[half]

    def position(self, half: str) -> int:
        return self._position[half]

    def alpha(self, half: str) -> str:
        edge = self._edge_of[half]
        return edge.head if half == edge.tail else edge.tail

    def sigma(self, half: str, sense: int = FORWARD) -> str:
        vertex = self.vertex(self._vertex_of[half])
        i = (self._position[half] + sense) % vertex.valence
        return vertex.half_edges[i]

    def half_edges(self) -> List[str]:
        return [h for v in self.vertices for h in v.half_edges]

    def sides(self) -> List[Side]:
        return sorted(Side(e.id, tag) for e in self.edges for tag in ('+', '-'))

    def valences(self) -> Dict[str, int]:
        return {v.id: v.valence for v in self.vertices}

    def is_orientable_surface(self) -> bool:
        #the ribbon surface is orientable iff twists can be cancelled by flipping vertices
        flip: Dict[str, int] = {}
        for start in self.vertices:
            if start.id in flip:
                continue
            flip[start.id] = 1
            stack = [start.id]
            while stack:
                vid = stack.pop()
                for half in self.vertex(vid).half_edges:
                    edge = self._edge_of[half]
                    other = self._vertex_of[self.alpha(half)]
                    wanted = flip[vid] * edge.twist
                    if other not in flip:
                        flip[other] = wanted
                        stack.append(other)
                    elif flip[other] != wanted:
                        return False
        return True

    #face tracing

    def side_of(self, state: State) -> Side:
        half, sense = state
        edge = self._edge_of[half]
        if half == edge.tail:
            return Side(edge.id, '+' if sense == FORWARD else '-')
        return Side(edge.id, '+' if sense == -edge.twist else '-')

    def next_state(self, state: State) -> State:
        half, sense = state
        arrival = self.alpha(half)
        sense = sense * self._edge_of[half].twist
        return self.sigma(arrival, sense), sense

    def reverse_state(self, state: State) -> State:
        half, sense = state
        return self.alpha(half), -sense * self._edge_of[half].twist

    def forward_state(self, side: Side) -> State:
        edge = self.edge(side.edge)
        return edge.tail, FORWARD if side.tag == '+' else BACKWARD


def _orbit(bp: FatGraphBlueprint, start: State) -> List[State]:
    orbit = [start]
    state = bp.next_state(start)
    while state != start:
        orbit.append(state)
        state = bp.next_state(state)
    return orbit


def trace_boundary_cycles(bp: FatGraphBlueprint) -> List[BoundaryCycle]:
    #corner-following; each boundary circle shows up as two opposite orbits
    seen: Set[State] = set()
    faces: List[List[State]] = []
    for side in bp.sides():
        start = bp.forward_state(side)
        if start in seen:
            continue
        orbit = _orbit(bp, start)
        reverse = {bp.reverse_state(s) for s in orbit}
        if reverse & set(orbit):
            raise BlueprintError(f"boundary walk through {side} revisits its own reverse")
        seen.update(orbit)
        seen.update(reverse)
        faces.append(orbit)

    cycles: List[BoundaryCycle] = []
    for orbit in faces:
        #sides() is sorted, so each orbit starts at its smallest side traversed from the tail
        sides = tuple(bp.side_of(s) for s in orbit)
        cycles.append(BoundaryCycle(len(cycles), sides, tuple(orbit)))

    total = sum(c.length for c in cycles)
    if total != 2 * len(bp.edges):
        raise BlueprintError(f"face tracing covered {total} sides, expected {2 * len(bp.edges)}")
    logger.debug(f"Traced {len(cycles)} boundary cycles: {[c.describe() for c in cycles]}")
    return cycles


def cycle_of_side(cycles: List[BoundaryCycle]) -> Dict[Side, int]:
    return {side: c.index for c in cycles for side in c.sides}
