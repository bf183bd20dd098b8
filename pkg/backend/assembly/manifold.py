import logging
import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

from blueprint.conditions import derive_polarity, prong_census, validate_conditions
from blueprint.fat_graph import BoundaryCycle, FatGraphBlueprint, Polarity, Side, State, trace_boundary_cycles
from blueprint.validation import ValidationReport
from config import SEAM_TOL

logger = logging.getLogger(__name__)

PI = math.pi
HALF_PI = math.pi / 2


class AssemblyError(ValueError):
    def __init__(self, message: str, report: Optional[ValidationReport] = None):
        self.report = report
        super().__init__(message)


class SurfaceClass(Enum):
    TORUS = "torus"
    KLEIN_BOTTLE = "klein bottle"


@dataclass(frozen=True)
class ChartSide:
    index: int
    side: Side
    edge: str
    departure: str  # half-edge the cycle traversal leaves from
    start_vertex: str
    end_vertex: str
    reflected: bool  # chart coordinates are (-x, -y) of the block's


@dataclass(frozen=True)
class ChartPoint:
    j: int
    x: float
    y: float
    on_seam: bool = False
    alternate: Optional['ChartPoint'] = None


@dataclass(frozen=True)
class TangentCircle:
    u: float
    chart: int
    vertex: str
    kind: str  # 'stable' on incoming components, 'unstable' on outgoing ones


@dataclass(frozen=True)
class TransverseComponent:
    index: int
    polarity: Polarity
    charts: Tuple[ChartSide, ...]

    @property
    def k(self) -> int:
        return len(self.charts)

    @property
    def surface_class(self) -> SurfaceClass:
        return SurfaceClass.TORUS if self.k % 2 == 0 else SurfaceClass.KLEIN_BOTTLE

    @property
    def is_torus(self) -> bool:
        return self.surface_class is SurfaceClass.TORUS

    @property
    def period(self) -> float:
        #horizontal deck translation (u + k*pi, v), with v -> -v when k is odd
        return self.k * PI

    def chart_for_edge(self, edge: str) -> ChartSide:
        for chart in self.charts:
            if chart.edge == edge:
                return chart
        raise KeyError(f"edge {edge} has no side on component {self.index}")

    def chart_to_global(self, j: int, x: float, y: float) -> Tuple[float, float]:
        if not 0 <= j < self.k:
            raise ValueError(f"chart index {j} out of range for k={self.k}")
        if abs(x) > HALF_PI + SEAM_TOL:
            raise ValueError(f"x={x} outside the face")
        u = x + j * PI + HALF_PI
        v = ((-1) ** j * y) % 1.0
        return u, v

    def _chart_at(self, j_raw: int, u: float, v: float) -> ChartPoint:
        return ChartPoint(j_raw % self.k, u - j_raw * PI - HALF_PI, ((-1) ** j_raw * v) % 1.0)

    def global_to_chart(self, u: float, v: float) -> ChartPoint:
        n = round(u / PI)
        if abs(u - n * PI) <= SEAM_TOL:
            right = self._chart_at(n, n * PI, v)
            left = self._chart_at(n - 1, n * PI, v)
            return ChartPoint(right.j, right.x, right.y, True, left)
        return self._chart_at(math.floor(u / PI), u, v)

    def tangent_circles(self) -> List[TangentCircle]:
        kind = 'stable' if self.polarity is Polarity.INCOMING else 'unstable'
        return [TangentCircle(j * PI, j, c.start_vertex, kind) for j, c in enumerate(self.charts)]

    def describe(self) -> str:
        return (f"component {self.index} polarity={self.polarity.value} k={self.k} "
                f"class={self.surface_class.value} sides={' '.join(str(c.side) for c in self.charts)}")


@dataclass(frozen=True)
class Seam:
    component: int
    j: int  # the seam sits at u = j*pi
    vertex: str
    half: str
    left: Tuple[str, int]  # (edge, block wall sign) leaving through +pi/2 in traversal order
    right: Tuple[str, int]


@dataclass(frozen=True)
class BlockRecord:
    edge: str
    minus_vertex: str  # vertex at block x = -pi/2
    plus_vertex: str
    incoming: Tuple[int, int]  # (component, chart)
    outgoing: Tuple[int, int]
    outgoing_reflected: bool


@dataclass(frozen=True)
class VerticalOrbit:
    vertex: str
    p: int


class AssembledManifold:
    def __init__(self, blueprint: FatGraphBlueprint, cycles: List[BoundaryCycle],
                 components: Dict[int, TransverseComponent], blocks: Dict[str, BlockRecord],
                 seams: List[Seam], vertical_orbits: List[VerticalOrbit]):
        self.blueprint = blueprint
        self.cycles = cycles
        self.components = components
        self.blocks = blocks
        self.seams = seams
        self.vertical_orbits = vertical_orbits
        self.logger = logging.getLogger(f"{__name__}.AssembledManifold")

    def component(self, index: int) -> TransverseComponent:
        if index not in self.components:
            raise KeyError(f"no transverse component {index}")
        return self.components[index]

    def incoming(self) -> List[TransverseComponent]:
        return [c for c in self.components.values() if c.polarity is Polarity.INCOMING]

    def outgoing(self) -> List[TransverseComponent]:
        return [c for c in self.components.values() if c.polarity is Polarity.OUTGOING]

    @property
    def orientable(self) -> bool:
        return all(c.k % 2 == 0 for c in self.components.values())

    def block_position(self, edge: str, polarity: Polarity) -> Tuple[int, int, bool]:
        block = self.blocks[edge]
        if polarity is Polarity.INCOMING:
            return block.incoming[0], block.incoming[1], False
        return block.outgoing[0], block.outgoing[1], block.outgoing_reflected

    def half_wall_census(self) -> Dict[str, int]:
        used = Counter()
        for seam in self.seams:
            used[(seam.left[0], seam.left[1], seam.half)] += 1
            used[(seam.right[0], seam.right[1], seam.half)] += 1
        expected = {(e.id, wall, half) for e in self.blueprint.edges
                    for wall in (-1, 1) for half in ('stable', 'unstable')}
        return {
            'stable': sum(n for key, n in used.items() if key[2] == 'stable'),
            'unstable': sum(n for key, n in used.items() if key[2] == 'unstable'),
            'reused': sum(1 for n in used.values() if n > 1),
            'unused': len(expected - set(used)),
        }

    def report_lines(self) -> List[str]:
        lines = [c.describe() for c in self.components.values()]
        lines += [f"vertical_orbit {o.vertex} p={o.p}" for o in self.vertical_orbits]
        lines += [f"seam component={s.component} u={s.j}pi vertex={s.vertex} half={s.half} "
                  f"left={s.left[0]}@{s.left[1]:+d} right={s.right[0]}@{s.right[1]:+d}" for s in self.seams]
        lines.append(f"orientable={'yes' if self.orientable else 'no'}")
        return lines


def seam_flip_composition(asm: AssembledManifold, index: int, y: float) -> float:
    """Carry the chart-0 height y once around component `index`, seam by seam.

    Each step leaves chart j at x = +pi/2 through global coordinates and comes back
    in chart j+1. Both charts must agree on the seam point, and the block wall the
    seam table records must match the chart's reflection. Returns the chart-0 height
    after k seams: y on a torus, 1 - y on a Klein bottle.
    """
    component = asm.component(index)
    seams = {s.j: s for s in asm.seams if s.component == index}
    j, height = 0, y % 1.0
    for _ in range(component.k):
        chart = component.charts[j]
        landing = (j + 1) % component.k
        #+pi/2 of a reflected chart is the block's -pi/2 wall
        wall = -1 if chart.reflected else 1
        if seams[landing].left != (chart.edge, wall):
            raise AssemblyError(f"seam {landing} of component {index} does not leave block {chart.edge} "
                                f"through wall {wall:+d}")
        u, v = component.chart_to_global(j, HALF_PI, height)
        point = component.global_to_chart(u, v)
        left = point.alternate
        gap = (left.y - height) % 1.0 if left is not None else 1.0
        if not point.on_seam or left.j != j or min(gap, 1.0 - gap) > SEAM_TOL:
            raise AssemblyError(f"charts {j} and {landing} of component {index} disagree at u={u:.6g}")
        j, height = point.j, point.y
    return height


def _reverse_orbit(bp: FatGraphBlueprint, states: Tuple[State, ...]) -> List[State]:
    reversed_states = [bp.reverse_state(s) for s in reversed(states)]
    sides = [bp.side_of(s) for s in reversed_states]
    start = sides.index(min(sides))
    return reversed_states[start:] + reversed_states[:start]


def _chart_sides(bp: FatGraphBlueprint, states: List[State],
                 block_departure: Dict[str, str]) -> Tuple[ChartSide, ...]:
    charts = []
    for j, state in enumerate(states):
        half = state[0]
        edge = bp.edge_of(half).id
        charts.append(ChartSide(j, bp.side_of(state), edge, half, bp.vertex_of(half),
                                bp.vertex_of(bp.alpha(half)), half != block_departure.get(edge, half)))
    return tuple(charts)


def assemble(bp: FatGraphBlueprint, polarity: Optional[Dict[int, Polarity]] = None) -> AssembledManifold:
    cycles = trace_boundary_cycles(bp)
    report = validate_conditions(bp, polarity, cycles)
    if not report.passed:
        reasons = "; ".join(v.message for v in report.violations)
        raise AssemblyError(f"blueprint rejected: {reasons}", report)
    if polarity is None:
        polarity = bp.polarity if bp.polarity else derive_polarity(bp, cycles)
    cycles = [c.with_polarity(polarity[c.index]) for c in cycles]

    #each block is oriented by the traversal of its incoming side
    components: Dict[int, TransverseComponent] = {}
    block_departure: Dict[str, str] = {}
    for cycle in cycles:
        if cycle.polarity is Polarity.INCOMING:
            charts = _chart_sides(bp, list(cycle.states), {})
            block_departure.update({c.edge: c.departure for c in charts})
            components[cycle.index] = TransverseComponent(cycle.index, cycle.polarity, charts)

    for cycle in cycles:
        if cycle.polarity is Polarity.OUTGOING:
            states = list(cycle.states)
            charts = _chart_sides(bp, states, block_departure)
            if charts[0].reflected:
                charts = _chart_sides(bp, _reverse_orbit(bp, cycle.states), block_departure)
            components[cycle.index] = TransverseComponent(cycle.index, cycle.polarity, charts)

    blocks: Dict[str, BlockRecord] = {}
    for edge in bp.edges:
        inc = next((c, ch) for c in components.values() if c.polarity is Polarity.INCOMING
                   for ch in c.charts if ch.edge == edge.id)
        out = next((c, ch) for c in components.values() if c.polarity is Polarity.OUTGOING
                   for ch in c.charts if ch.edge == edge.id)
        departure = block_departure[edge.id]
        blocks[edge.id] = BlockRecord(edge.id, bp.vertex_of(departure), bp.vertex_of(bp.alpha(departure)),
                                      (inc[0].index, inc[1].index), (out[0].index, out[1].index),
                                      out[1].reflected)

    seams: List[Seam] = []
    for component in components.values():
        half = 'stable' if component.polarity is Polarity.INCOMING else 'unstable'
        for j, chart in enumerate(component.charts):
            previous = component.charts[j - 1]
            seams.append(Seam(component.index, j, chart.start_vertex, half,
                              (previous.edge, -1 if previous.reflected else 1),
                              (chart.edge, 1 if chart.reflected else -1)))

    orbits = [VerticalOrbit(v.vertex, v.p) for v in prong_census(bp)]
    asm = AssembledManifold(bp, cycles, components, blocks, seams, orbits)
    census = asm.half_wall_census()
    if census['reused'] or census['unused']:
        raise AssemblyError(f"half-wall bookkeeping failed: {census}")
    logger.info(f"Assembled {len(blocks)} blocks into {len(components)} transverse components "
                f"({sum(c.is_torus for c in components.values())} tori)")
    return asm


def chart_to_global(component: TransverseComponent, j: int, x: float, y: float) -> Tuple[float, float]:
    return component.chart_to_global(j, x, y)


def global_to_chart(component: TransverseComponent, u: float, v: float) -> ChartPoint:
    return component.global_to_chart(u, v)
