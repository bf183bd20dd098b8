import logging
import re
from typing import Dict, List

from blueprint.fat_graph import BlueprintError, Edge, FatGraphBlueprint, Polarity, Vertex

logger = logging.getLogger(__name__)

_IDENT = r"[A-Za-z0-9_.+\-]+"
_VERTEX = re.compile(rf"^vertex\s+({_IDENT})\s*:\s*(.*)$")
_EDGE = re.compile(rf"^edge\s+({_IDENT})\s*:\s*({_IDENT})\s+({_IDENT})(?:\s+(twist))?\s*$")
_POLARITY = re.compile(r"^polarity\s+(\d+)\s*:\s*(incoming|outgoing)\s*$")
_LABEL = re.compile(rf"^label\s+({_IDENT})\s*:\s*(.*)$")
_IDENT_ONLY = re.compile(rf"^{_IDENT}$")


def parse_blueprint(text: str) -> FatGraphBlueprint:
    vertices: List[Vertex] = []
    edges: List[Edge] = []
    polarity: Dict[int, Polarity] = {}
    labels: Dict[str, str] = {}
    seen_ids: Dict[str, int] = {}

    def claim(identifier: str, line: int) -> None:
        if identifier in seen_ids:
            raise BlueprintError(f"duplicate identifier '{identifier}' (first on line {seen_ids[identifier]})", line)
        seen_ids[identifier] = line

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        directive = line.split(None, 1)[0]

        if directive == 'vertex':
            match = _VERTEX.match(line)
            if not match:
                raise BlueprintError(f"malformed vertex directive: {line!r}", number)
            halves = match.group(2).split()
            for half in halves:
                if not _IDENT_ONLY.match(half):
                    raise BlueprintError(f"bad half-edge identifier {half!r}", number)
                claim(half, number)
            claim(match.group(1), number)
            vertices.append(Vertex(match.group(1), tuple(halves), number))

        elif directive == 'edge':
            match = _EDGE.match(line)
            if not match:
                raise BlueprintError(f"malformed edge directive: {line!r}", number)
            claim(match.group(1), number)
            edges.append(Edge(match.group(1), match.group(2), match.group(3),
                              twisted=match.group(4) is not None, line=number))

        elif directive == 'polarity':
            match = _POLARITY.match(line)
            if not match:
                raise BlueprintError(f"malformed polarity directive: {line!r}", number)
            index = int(match.group(1))
            if index in polarity:
                raise BlueprintError(f"polarity of cycle {index} given twice", number)
            polarity[index] = Polarity(match.group(2))

        elif directive == 'label':
            match = _LABEL.match(line)
            if not match:
                raise BlueprintError(f"malformed label directive: {line!r}", number)
            labels[match.group(1)] = match.group(2).strip()

        else:
            raise BlueprintError(f"unknown directive '{directive}'", number)

    if not vertices:
        raise BlueprintError("blueprint declares no vertices")
    bp = FatGraphBlueprint(tuple(vertices), tuple(edges), polarity, labels)
    logger.debug(f"Parsed blueprint with {len(vertices)} vertices and {len(edges)} edges")
    return bp


def format_blueprint(bp: FatGraphBlueprint) -> str:
    lines = [f"vertex {v.id}: {' '.join(v.half_edges)}" for v in bp.vertices]
    for edge in bp.edges:
        lines.append(f"edge {edge.id}: {edge.tail} {edge.head}" + (" twist" if edge.twisted else ""))
    for index in sorted(bp.polarity):
        lines.append(f"polarity {index}: {bp.polarity[index].value}")
    for name in sorted(bp.labels):
        lines.append(f"label {name}: {bp.labels[name]}")
    return "\n".join(lines) + "\n"
