import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np
from scipy.optimize import brentq

from block_flow.model_block import HALF_PI, exit_shear
from config import CURVE_BASE_SAMPLES, CURVE_CLIP, CURVE_RESOLUTION, DENSITY_BOX, MAX_CURVES, MAX_GENERATION
from returnmap.return_system import PI, ReturnMapError, ReturnMapSystem

logger = logging.getLogger(__name__)

_MIN_DU = 1e-9


class NonGraphCurveError(ReturnMapError):
    pass


@dataclass
class StableCurve:
    component: int
    chart: int
    u: np.ndarray  # strictly increasing, inside [chart*pi, (chart+1)*pi]
    v: np.ndarray  # continuous lift, v[0] in [0, 1)

    def slopes(self) -> np.ndarray:
        if len(self.u) < 2:
            return np.zeros(len(self.u))
        return np.gradient(self.v, self.u)


@dataclass
class StableCurveFamily:
    generation: int
    curves: List[StableCurve]

    @property
    def max_slope(self) -> float:
        return max((float(np.max(np.abs(c.slopes()))) for c in self.curves if len(c.u) > 1), default=0.0)

    def counts_per_annulus(self) -> Dict[Tuple[int, int], int]:
        counts: Dict[Tuple[int, int], int] = {}
        for curve in self.curves:
            key = (curve.component, curve.chart)
            counts[key] = counts.get(key, 0) + 1
        return counts

    def outside_cone(self, kappa: float) -> bool:
        #tangent (du, dv) avoids |du| <= kappa*2*pi*|dv| iff |dv/du| < 1/(2*pi*kappa)
        return self.max_slope < 1.0 / (2 * PI * kappa)

    def rows(self):
        for curve_id, curve in enumerate(self.curves):
            for u, v in zip(curve.u, curve.v):
                yield self.generation, curve.component, curve_id, float(u), float(v) % 1.0


def generation_zero(sys: ReturnMapSystem, samples: int = CURVE_BASE_SAMPLES) -> StableCurveFamily:
    #A^-1 of the stable tangent circles u' = n*pi: lines m00*u + m01*v + s = n*pi
    curves: List[StableCurve] = []
    for source in sys.source_components():
        glue = sys.glue(source.index)
        (m00, m01), s = glue.M[0], glue.shift[0]
        pair = sys.spec.pair_from(source.index) if not sys.reverse else sys.spec.pair_into(source.index)
        per_annulus = glue.target.k * abs(pair.b)
        for j in range(source.k):
            u = np.linspace(j * PI, (j + 1) * PI, samples)
            for n in range(per_annulus):
                v = (n * PI - s - m00 * u) / m01
                v = v - math.floor(v[0])
                curves.append(StableCurve(source.index, j, u, v))
    return StableCurveFamily(0, curves)


def _split_at_seams(component: int, period: float, k: int, u: np.ndarray, v: np.ndarray) -> List[StableCurve]:
    pieces: List[StableCurve] = []
    lo, hi = math.floor(u[0] / PI), math.ceil(u[-1] / PI)
    for n in range(lo, hi):
        left, right = n * PI, (n + 1) * PI
        inside = (u > left) & (u < right)
        if not inside.any():
            continue
        pu, pv = [], []
        if u[0] <= left:
            pu.append(left)
            pv.append(float(np.interp(left, u, v)))
        pu.extend(u[inside])
        pv.extend(v[inside])
        if u[-1] >= right:
            pu.append(right)
            pv.append(float(np.interp(right, u, v)))
        pu, pv = np.asarray(pu, dtype=float), np.asarray(pv, dtype=float)
        keep = np.concatenate([[True], np.diff(pu) > _MIN_DU])
        pu, pv = pu[keep], pv[keep]
        if len(pu) < 2:
            continue
        shift = math.floor(n / k) * period
        pv = pv - math.floor(pv[0])
        pieces.append(StableCurve(component, n % k, pu - shift, pv))
    return pieces


def _block_graph(sys: ReturnMapSystem, curve: StableCurve) -> Tuple[np.ndarray, np.ndarray]:
    #curve in block coordinates of the outgoing chart, x increasing
    chart = sys.asm.component(curve.component).charts[curve.chart]
    x = curve.u - curve.chart * PI - HALF_PI
    y = (-1) ** curve.chart * curve.v
    if chart.reflected:
        x, y = -x[::-1], -y[::-1]
    return x, y


@dataclass(frozen=True)
class _Strand:
    parent: int
    start: float
    stop: float  # next strand start, or the end of the parent


def _strand_keys(sys: ReturnMapSystem, parent: int, curve: StableCurve,
                 resolution: float) -> List[Tuple[Tuple[int, int, int, int], _Strand]]:
    x, y = _block_graph(sys, curve)
    edge = HALF_PI - CURVE_CLIP
    lo, hi = max(x[0], -edge), min(x[-1], edge)
    if hi - lo <= _MIN_DU:
        return []
    grid = np.arange(math.floor(lo / resolution) + 1, math.ceil(hi / resolution)) * resolution
    grid = grid[(grid > lo) & (grid < hi)]
    starts = np.concatenate([[lo], grid])
    stops = np.append(grid, hi)
    #entry phase in the (u, 2 pi v) frame picks the merge cell
    phase = np.mod(np.interp(starts, x, y) - sys.shear_sign * exit_shear(starts, sys.lam), 1.0)
    cells = np.floor(starts / resolution).astype(int)
    phases = np.floor(phase * 2 * PI / resolution).astype(int)
    return [((curve.component, curve.chart, int(c), int(p)), _Strand(parent, float(s), float(t)))
            for c, p, s, t in zip(cells, phases, starts, stops)]


def _strand_end(lam: float, start: float, stop: float) -> float:
    #at most one fiber turn past start
    target = float(exit_shear(start, lam)) + 1.0
    if float(exit_shear(stop, lam)) <= target:
        return stop
    return brentq(lambda t: float(exit_shear(t, lam)) - target, start, stop, xtol=1e-15)


def _pullback(sys: ReturnMapSystem, curve: StableCurve, start: float, end: float,
              samples: int) -> List[StableCurve]:
    out = sys.asm.component(curve.component)
    chart = out.charts[curve.chart]
    x, y = _block_graph(sys, curve)
    nodes = np.unique(np.concatenate([np.linspace(start, end, samples), x[(x > start) & (x < end)]]))
    ys = np.interp(nodes, x, y) - sys.shear_sign * exit_shear(nodes, sys.lam)

    #back into the chart the flow entered through, then through A^-1
    landing_index, j_in, reflected_in = sys.asm.block_position(chart.edge, out.polarity.opposite)
    landing = sys.asm.component(landing_index)
    xs_in, ys_in = (-nodes, -ys) if reflected_in else (nodes, ys)
    u2 = xs_in + j_in * PI + HALF_PI
    v2 = (-1) ** j_in * ys_in
    source = _source_for_landing(sys, landing.index)
    u, v = sys.glue(source).inverse(u2, v2)

    du = np.diff(u)
    if np.all(du < 0):
        u, v = u[::-1], v[::-1]
    elif not np.all(du > 0):
        raise NonGraphCurveError(f"pullback of a curve on component {curve.component} chart {curve.chart} "
                                 f"is not a graph over u (lambda={sys.lam})")
    src = sys.asm.component(source)
    return _split_at_seams(source, src.period, src.k, u, v)


def _source_for_landing(sys: ReturnMapSystem, landing: int) -> int:
    for source in sys.source_components():
        if sys.glue(source.index).target.index == landing:
            return source.index
    raise ReturnMapError(f"no source torus glues onto component {landing}")


def pull_back_family(sys: ReturnMapSystem, family: StableCurveFamily, resolution: float = CURVE_RESOLUTION,
                     samples: int = CURVE_BASE_SAMPLES) -> StableCurveFamily:
    """Next generation: preimages of every curve over the full clip window |x| <= pi/2 - clip.

    Each preimage is cut into strands of at most one fiber turn, one strand per
    resolution step in x. Strands entering the same block, x cell and phase cell
    are kept once.
    """
    strands: Dict[Tuple[int, int, int, int], _Strand] = {}
    for parent, curve in enumerate(family.curves):
        for key, strand in _strand_keys(sys, parent, curve, resolution):
            strands.setdefault(key, strand)
    curves: List[StableCurve] = []
    for strand in strands.values():
        end = _strand_end(sys.lam, strand.start, strand.stop)
        if end - strand.start <= _MIN_DU:
            continue
        curves.extend(_pullback(sys, family.curves[strand.parent], strand.start, end, samples))
        if len(curves) > MAX_CURVES:
            raise ReturnMapError(f"generation {family.generation + 1} exceeds {MAX_CURVES} curves")
    logger.debug(f"Generation {family.generation + 1}: {len(strands)} strands from {len(family.curves)} curves")
    return StableCurveFamily(family.generation + 1, curves)


def stable_curves(sys: ReturnMapSystem, n: int, resolution: float = CURVE_RESOLUTION,
                  samples: int = CURVE_BASE_SAMPLES) -> List[StableCurveFamily]:
    if not 0 <= n <= MAX_GENERATION:
        raise ReturnMapError(f"generation {n} outside 0..{MAX_GENERATION}")
    families = [generation_zero(sys, samples)]
    for _ in range(n):
        families.append(pull_back_family(sys, families[-1], resolution, samples))
        logger.info(f"Stable generation {families[-1].generation}: {len(families[-1].curves)} curves, "
                    f"max slope {families[-1].max_slope:.4g}")
    return families


@dataclass
class DensityReport:
    box: float
    boxes: int
    fractions: List[float]  # cumulative, one per generation


def _densify(u: np.ndarray, v: np.ndarray, spacing: float) -> Tuple[np.ndarray, np.ndarray]:
    w = 2 * PI * v
    steps = np.hypot(np.diff(u), np.diff(w))
    counts = np.maximum(1, np.ceil(steps / spacing).astype(int))
    seg = np.repeat(np.arange(len(counts)), counts)
    #position 1..c of each sample inside its segment
    t = (np.arange(len(seg)) - np.repeat(np.cumsum(counts) - counts, counts) + 1) / counts[seg]
    us = u[seg] + t * (u[seg + 1] - u[seg])
    ws = w[seg] + t * (w[seg + 1] - w[seg])
    return np.concatenate([u[:1], us]), np.concatenate([w[:1], ws])


def density_probe(sys: ReturnMapSystem, families: List[StableCurveFamily],
                  box: float = DENSITY_BOX) -> DensityReport:
    """Fraction of box-sized cells in the (u, 2 pi v) frame met by the union of generations."""
    shapes = {c.index: (math.ceil(c.period / box), math.ceil(2 * PI / box)) for c in sys.source_components()}
    hit = {index: np.zeros(shape, dtype=bool) for index, shape in shapes.items()}
    total = sum(nu * nv for nu, nv in shapes.values())
    fractions: List[float] = []
    for family in families:
        for curve in family.curves:
            us, ws = _densify(curve.u, curve.v, box / 2)
            nu, nv = shapes[curve.component]
            iu = np.clip((us / box).astype(int), 0, nu - 1)
            iv = np.mod(np.floor(np.mod(ws, 2 * PI) / box).astype(int), nv)
            hit[curve.component][iu, iv] = True
        fractions.append(sum(int(h.sum()) for h in hit.values()) / total)
    return DensityReport(box, total, fractions)
