import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Tuple

import networkx as nx

from assembly.manifold import assemble
from blueprint.conditions import VertexProng, prong_census
from blueprint.fat_graph import FatGraphBlueprint
from closure.gluing import GluingError, GluingSpec, validate_gluing

logger = logging.getLogger(__name__)


class FlowKind(Enum):
    ANOSOV = "Anosov"
    PSEUDO_ANOSOV = "pseudo-Anosov"
    ONE_PRONG = "one-prong pseudo-Anosov"


@dataclass(frozen=True)
class FlowClass:
    kind: FlowKind
    singular_orbits: Tuple[Tuple[str, int], ...]  # (vertex, p) for every p != 2
    torus_bundle: bool = False

    @property
    def one_prong_count(self) -> int:
        return sum(1 for _, p in self.singular_orbits if p == 1)

    def summary(self) -> str:
        parts = [self.kind.value]
        if self.kind is FlowKind.ONE_PRONG:
            parts.append(f"{self.one_prong_count} one-prong orbits")
        elif self.kind is FlowKind.PSEUDO_ANOSOV:
            counts: dict = {}
            for _, p in self.singular_orbits:
                counts[p] = counts.get(p, 0) + 1
            parts += [f"{n} {p}-prong orbit{'s' if n > 1 else ''}" for p, n in sorted(counts.items())]
        if self.torus_bundle:
            parts.append("torus bundle")
        return ", ".join(parts)


def is_circle_blueprint(bp: FatGraphBlueprint) -> bool:
    if any(v.valence != 2 for v in bp.vertices):
        return False
    graph = nx.MultiGraph()
    graph.add_nodes_from(v.id for v in bp.vertices)
    graph.add_edges_from((bp.vertex_of(e.tail), bp.vertex_of(e.head)) for e in bp.edges)
    return nx.is_connected(graph)


def flow_class_from_census(census: Sequence[VertexProng], torus_bundle: bool = False) -> FlowClass:
    singular = tuple(sorted((c.vertex, c.p) for c in census if c.p != 2))
    if any(p == 1 for _, p in singular):
        kind = FlowKind.ONE_PRONG
    elif singular:
        kind = FlowKind.PSEUDO_ANOSOV
    else:
        kind = FlowKind.ANOSOV
    return FlowClass(kind, singular, torus_bundle)


def classify_flow(bp: FatGraphBlueprint, spec: GluingSpec) -> FlowClass:
    """Classify the closed flow from the prong census of the blueprint.

    The gluing must validate first; its matrix never changes the answer.
    """
    asm = assemble(bp)
    report = validate_gluing(asm, spec)
    if not report.passed:
        raise GluingError("cannot classify an invalid gluing: " + ", ".join(report.codes()), report=report)
    #a nontrivial surgery leaves the torus bundle family
    surgered = any(not record.trivial for record in spec.surgeries)
    flow = flow_class_from_census(prong_census(bp), torus_bundle=is_circle_blueprint(bp) and not surgered)
    logger.info(f"Classified closed flow as {flow.summary()}")
    return flow


def singular_orbit_lines(flow: FlowClass) -> List[str]:
    return [f"singular_orbit {vertex} p={p}" for vertex, p in flow.singular_orbits]
