import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from blueprint.fat_graph import (BlueprintError, BoundaryCycle, FatGraphBlueprint, Polarity, Side,
                                 cycle_of_side, trace_boundary_cycles)
from blueprint.validation import ValidationReport

logger = logging.getLogger(__name__)


class ProngClass(Enum):
    ONE_PRONG = "one-prong"
    REGULAR = "regular"
    SINGULAR = "p-prong singular"


@dataclass(frozen=True)
class VertexProng:
    vertex: str
    p: int
    kind: ProngClass


@dataclass(frozen=True)
class EulerData:
    vertices: int
    edges: int
    boundary_cycles: int
    chi_surface: int  # chi of the ribbon surface, V - E
    chi_closed: int  # boundary circles capped by discs
    orientable: bool

    @property
    def genus(self) -> int:
        #orientable genus, or number of cross-caps otherwise
        return (2 - self.chi_closed) // 2 if self.orientable else 2 - self.chi_closed


def side_adjacency(bp: FatGraphBlueprint, cycles: List[BoundaryCycle]) -> List[Tuple[int, int, str]]:
    #two cycles are adjacent when they carry the two sides of one edge
    owner = cycle_of_side(cycles)
    pairs = []
    for edge in bp.edges:
        a = owner[Side(edge.id, '+')]
        b = owner[Side(edge.id, '-')]
        pairs.append((a, b, edge.id))
    return pairs


def derive_polarity(bp: FatGraphBlueprint,
                    cycles: Optional[List[BoundaryCycle]] = None) -> Optional[Dict[int, Polarity]]:
    """2-colour the side-adjacency relation.

    Within each connected family of cycles the one holding the smallest side is
    incoming. Returns None when the relation is not bipartite.
    """
    cycles = cycles if cycles is not None else trace_boundary_cycles(bp)
    neighbours: Dict[int, List[int]] = {c.index: [] for c in cycles}
    for a, b, _ in side_adjacency(bp, cycles):
        neighbours[a].append(b)
        neighbours[b].append(a)

    colour: Dict[int, Polarity] = {}
    #cycles are already ordered by smallest side
    for cycle in cycles:
        if cycle.index in colour:
            continue
        colour[cycle.index] = Polarity.INCOMING
        queue = deque([cycle.index])
        while queue:
            current = queue.popleft()
            for other in neighbours[current]:
                wanted = colour[current].opposite
                if other not in colour:
                    colour[other] = wanted
                    queue.append(other)
                elif colour[other] is not wanted:
                    return None
    return colour


def validate_conditions(bp: FatGraphBlueprint,
                        polarity: Optional[Dict[int, Polarity]] = None,
                        cycles: Optional[List[BoundaryCycle]] = None) -> ValidationReport:
    cycles = cycles if cycles is not None else trace_boundary_cycles(bp)
    report = ValidationReport()

    for vertex in sorted(bp.vertices, key=lambda v: v.id):
        if vertex.valence % 2:
            report.add('condition_I', f"vertex {vertex.id} has odd valence {vertex.valence}", vertex.id)

    derived = derive_polarity(bp, cycles)
    report.details['bipartite'] = derived is not None
    if derived is None:
        report.add('not_bipartite', "no polarity assignment separates the two sides of every edge")

    source = 'declared'
    if polarity is None:
        if bp.polarity:
            polarity = bp.polarity
        else:
            polarity, source = derived, 'derived'
    report.details['polarity_source'] = source

    if polarity is not None:
        for cycle in cycles:
            if cycle.index not in polarity:
                report.add('polarity_missing', f"cycle {cycle.index} has no polarity", str(cycle.index))
        unknown = sorted(set(polarity) - {c.index for c in cycles})
        for index in unknown:
            report.add('polarity_unknown_cycle', f"polarity given for nonexistent cycle {index}", str(index))
        for a, b, edge_id in side_adjacency(bp, cycles):
            if a == b:
                report.add('condition_II', f"both sides of edge {edge_id} lie on cycle {a}", edge_id)
            elif a in polarity and b in polarity and polarity[a] is polarity[b]:
                report.add('condition_II',
                           f"both sides of edge {edge_id} are {polarity[a].value}", edge_id)
        report.details['polarity'] = {i: p.value for i, p in sorted(polarity.items())}

    report.details['cycles'] = [c.describe() for c in cycles]
    if not report.passed:
        logger.warning(f"Blueprint conditions failed: {report.codes()}")
    return report


def prong_census(bp: FatGraphBlueprint) -> List[VertexProng]:
    census = []
    for vertex in bp.vertices:
        if vertex.valence % 2:
            raise BlueprintError(f"vertex {vertex.id} has odd valence {vertex.valence}", vertex.line)
        p = vertex.valence // 2
        if p == 1:
            kind = ProngClass.ONE_PRONG
        elif p == 2:
            kind = ProngClass.REGULAR
        else:
            kind = ProngClass.SINGULAR
        census.append(VertexProng(vertex.id, p, kind))
    return census


def euler_characteristic(bp: FatGraphBlueprint,
                         cycles: Optional[List[BoundaryCycle]] = None) -> EulerData:
    cycles = cycles if cycles is not None else trace_boundary_cycles(bp)
    v, e, b = len(bp.vertices), len(bp.edges), len(cycles)
    return EulerData(v, e, b, v - e, v - e + b, bp.is_orientable_surface())


def apply_polarity(cycles: List[BoundaryCycle], polarity: Dict[int, Polarity]) -> List[BoundaryCycle]:
    return [c.with_polarity(polarity[c.index]) for c in cycles]
