import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from assembly.manifold import AssembledManifold, TransverseComponent, assemble
from block_flow.model_block import (HALF_PI, BlockDomainError, exit_map, exit_shear_derivative,
                                    inverse_exit_map)
from blueprint.fat_graph import FatGraphBlueprint, Polarity
from closure.gluing import GluingError, GluingMap, GluingSpec, gluing_map, require_valid
from config import DEFAULT_KAPPA, FD_STEP, NEAR_SINGULAR_TOL, SEAM_TOL

logger = logging.getLogger(__name__)

PI = math.pi
NORM_SCALE = np.diag([1.0, 2 * PI])
NORM_SCALE_INV = np.diag([1.0, 1 / (2 * PI)])


class ReturnMapError(ValueError):
    pass


@dataclass(frozen=True)
class ChartHit:
    component: int
    j: int
    x: float
    y: float


@dataclass(frozen=True)
class ReturnStep:
    component: int
    u: float
    v: float
    edge: str
    entry: ChartHit  # where A lands, in chart coordinates
    exit: ChartHit
    block_x: float

    @property
    def point(self) -> Tuple[int, float, float]:
        return self.component, self.u, self.v


@dataclass(frozen=True)
class TerminatesAtStableSet:
    component: int  # the torus the A-image lands on
    u: float
    vertex: str  # vertical orbit owning the tangent circle


StepResult = Union[ReturnStep, TerminatesAtStableSet]


def wrap_difference(d, period: float):
    return (np.asarray(d) + period / 2) % period - period / 2


class ReturnMapSystem:
    """First return to the outgoing tori, phi = exit o f o entry o A.

    The reversed system lives on the incoming tori and returns through
    A^-1 and the inverse block shear.
    """

    def __init__(self, asm: AssembledManifold, spec: GluingSpec, lam: float,
                 kappa: float = DEFAULT_KAPPA, reverse: bool = False):
        if not lam > 0:
            raise ReturnMapError(f"shear strength must be positive, got {lam}")
        try:
            require_valid(asm, spec)
        except GluingError as e:
            raise ReturnMapError(str(e)) from e

        self.asm = asm
        self.spec = spec
        self.lam = float(lam)
        self.kappa = float(kappa)
        self.reverse = reverse
        self.logger = logging.getLogger(f"{__name__}.ReturnMapSystem")

        self._glue: Dict[int, GluingMap] = {}
        for pair in spec.pairs:
            forward = gluing_map(asm, pair)
            if reverse:
                self._glue[pair.in_component] = forward.inverted()
            else:
                self._glue[pair.out_component] = forward

        limit = self.kappa_max()
        if not 0 < self.kappa < limit:
            raise ReturnMapError(f"cone slope kappa={self.kappa} outside (0, {limit:.6g})")

    @classmethod
    def from_blueprint(cls, bp: FatGraphBlueprint, spec: GluingSpec, lam: float,
                       kappa: float = DEFAULT_KAPPA) -> 'ReturnMapSystem':
        return cls(assemble(bp), spec, lam, kappa)

    def reversed(self, kappa: Optional[float] = None) -> 'ReturnMapSystem':
        return ReturnMapSystem(self.asm, self.spec, self.lam, self.kappa if kappa is None else kappa,
                               not self.reverse)

    def with_lambda(self, lam: float) -> 'ReturnMapSystem':
        return ReturnMapSystem(self.asm, self.spec, lam, self.kappa, self.reverse)

    def with_kappa(self, kappa: float) -> 'ReturnMapSystem':
        return ReturnMapSystem(self.asm, self.spec, self.lam, kappa, self.reverse)

    @property
    def shear_sign(self) -> int:
        return -1 if self.reverse else 1

    def source_components(self) -> List[TransverseComponent]:
        polarity = Polarity.INCOMING if self.reverse else Polarity.OUTGOING
        return sorted((c for c in self.asm.components.values() if c.polarity is polarity),
                      key=lambda c: c.index)

    def kappa_max(self) -> float:
        return min(g.kappa_max() for g in self._glue.values())

    def glue(self, component: int) -> GluingMap:
        if component not in self._glue:
            raise ReturnMapError(f"component {component} is not a source torus of this system")
        return self._glue[component]

    def exit_position(self, edge: str) -> Tuple[int, int, bool]:
        polarity = Polarity.INCOMING if self.reverse else Polarity.OUTGOING
        return self.asm.block_position(edge, polarity)

    def land(self, component: int, u: float, v: float) -> Tuple[TransverseComponent, float, float]:
        glue = self.glue(component)
        u2, v2 = glue.apply(u, v)
        return glue.target, float(np.mod(u2, glue.target.period)), float(np.mod(v2, 1.0))

    def step(self, component: int, u: float, v: float) -> StepResult:
        target, u2, v2 = self.land(component, u, v)
        n = round(u2 / PI)
        if abs(u2 - n * PI) <= SEAM_TOL:
            vertex = target.charts[n % target.k].start_vertex
            return TerminatesAtStableSet(target.index, u2, vertex)

        hit = target.global_to_chart(u2, v2)
        chart = target.charts[hit.j]
        xb, yb = (-hit.x, -hit.y) if chart.reflected else (hit.x, hit.y)
        try:
            if self.reverse:
                xb, yb = inverse_exit_map(xb, yb, self.lam)
            else:
                xb, yb = exit_map(xb, yb, self.lam)
        except BlockDomainError as e:
            self.logger.warning(f"A-image u'={u2!r} on component {target.index} is near-singular")
            raise ReturnMapError(f"point lands within the wall cutoff of a tangent circle: {e}") from e

        out_index, j_out, reflected = self.exit_position(chart.edge)
        out = self.asm.component(out_index)
        xc, yc = (-xb, -yb) if reflected else (xb, yb)
        u3, v3 = out.chart_to_global(j_out, float(xc), float(yc))
        return ReturnStep(out_index, u3, v3, chart.edge,
                          ChartHit(target.index, hit.j, hit.x, hit.y),
                          ChartHit(out_index, j_out, float(xc), float(yc) % 1.0),
                          float(xb))

    def _chart_factors(self, target: TransverseComponent, j: int) -> Tuple[int, int, int]:
        #(sigma_in, reflection sign, sigma_out) around the block shear
        chart = target.charts[j]
        _, j_out, reflected = self.exit_position(chart.edge)
        eps = -1 if chart.reflected != reflected else 1
        return (-1) ** j, eps, (-1) ** j_out

    def jacobian(self, component: int, u: float, v: float) -> np.ndarray:
        glue = self.glue(component)
        target, u2, _ = self.land(component, u, v)
        n = round(u2 / PI)
        if abs(u2 - n * PI) < NEAR_SINGULAR_TOL:
            self.logger.warning(f"Jacobian requested {abs(u2 - n * PI):.2e} from a stable circle")
            raise ReturnMapError("Jacobian is near-singular next to a tangent circle")
        j = int(math.floor(u2 / PI)) % target.k
        x = u2 - j * PI - HALF_PI
        sigma_in, eps, sigma_out = self._chart_factors(target, j)
        shear = np.array([[1.0, 0.0], [self.shear_sign * float(exit_shear_derivative(x, self.lam)), 1.0]])
        return np.diag([1.0, sigma_out]) @ (eps * shear) @ np.diag([1.0, sigma_in]) @ glue.M

    def scaled_jacobian(self, component: int, u: float, v: float) -> np.ndarray:
        return NORM_SCALE @ self.jacobian(component, u, v) @ NORM_SCALE_INV

    def scaled_jacobians_at(self, component: int, u2: np.ndarray) -> np.ndarray:
        """Vectorized scaled Jacobians for landing abscissae u2 (already reduced)."""
        glue = self.glue(component)
        target = glue.target
        js = np.floor(u2 / PI).astype(int) % target.k
        x = u2 - js * PI - HALF_PI
        factors = np.array([self._chart_factors(target, j) for j in range(target.k)], dtype=float)
        sigma_in, eps, sigma_out = factors[js, 0], factors[js, 1], factors[js, 2]
        shear = self.shear_sign * 2 * PI * exit_shear_derivative(x, self.lam)
        ms = glue.scaled_matrix
        #rows of diag(1, s_in) @ M_s
        r0 = np.broadcast_to(ms[0], (len(u2), 2))
        r1 = sigma_in[:, None] * ms[1][None, :]
        out = np.empty((len(u2), 2, 2))
        out[:, 0, :] = eps[:, None] * r0
        out[:, 1, :] = (eps * sigma_out)[:, None] * (shear[:, None] * r0 + r1)
        return out


def return_step(sys: ReturnMapSystem, component: int, u: float, v: float) -> StepResult:
    return sys.step(component, u, v)


def return_jacobian(sys: ReturnMapSystem, component: int, u: float, v: float) -> np.ndarray:
    return sys.jacobian(component, u, v)


def orbit(sys: ReturnMapSystem, component: int, u: float, v: float, n: int) -> List[StepResult]:
    steps: List[StepResult] = []
    for _ in range(n):
        result = sys.step(component, u, v)
        steps.append(result)
        if isinstance(result, TerminatesAtStableSet):
            logger.info(f"Orbit stopped on the stable set of vertex {result.vertex} after {len(steps)} steps")
            break
        component, u, v = result.point
    return steps


def finite_difference_jacobian(sys: ReturnMapSystem, component: int, u: float, v: float,
                               h: float = FD_STEP) -> np.ndarray:
    columns = []
    for du, dv in ((h, 0.0), (0.0, h)):
        plus = sys.step(component, u + du, v + dv)
        minus = sys.step(component, u - du, v - dv)
        if not isinstance(plus, ReturnStep) or not isinstance(minus, ReturnStep):
            raise ReturnMapError("finite-difference stencil touches the stable set")
        if plus.component != minus.component:
            raise ReturnMapError("finite-difference stencil straddles two tori")
        period = sys.asm.component(plus.component).period
        columns.append([float(wrap_difference(plus.u - minus.u, period)) / (2 * h),
                        float(wrap_difference(plus.v - minus.v, 1.0)) / (2 * h)])
    return np.array(columns).T


def sample_domain_points(sys: ReturnMapSystem, n: int, seed: int,
                         max_abs_x: float = 1.3) -> List[Tuple[int, float, float]]:
    #seeded points whose A-image sits at chart abscissa |x| <= max_abs_x
    rng = np.random.default_rng(seed)
    sources = sys.source_components()
    points = []
    for _ in range(n):
        source = sources[int(rng.integers(len(sources)))]
        glue = sys.glue(source.index)
        j = int(rng.integers(glue.target.k))
        x = rng.uniform(-max_abs_x, max_abs_x)
        u2 = x + j * PI + HALF_PI
        u, v = glue.inverse(u2, rng.uniform(0.0, 1.0))
        points.append((source.index, float(np.mod(u, source.period)), float(np.mod(v, 1.0))))
    return points
