import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import (CONE_GRID, EXPANSION_TARGET, JACOBIAN_SAMPLES, LAMBDA_BRACKET, LAMBDA_REL_TOL, RANDOM_SEED,
                    STABLE_COLLAR)
from returnmap.return_system import (PI, ReturnMapError, ReturnMapSystem, ReturnStep, finite_difference_jacobian,
                                     sample_domain_points)

logger = logging.getLogger(__name__)


@dataclass
class ConeReport:
    lam: float
    kappa: float
    grid: int
    collar: float
    points: int
    contained: bool
    margin: float  # radians between the cone edge and the widest image direction
    min_expansion: float
    rows: np.ndarray = field(default_factory=lambda: np.empty((0, 4)), repr=False)

    @property
    def passed(self) -> bool:
        return self.contained and self.margin > 0 and self.min_expansion >= EXPANSION_TARGET

    def summary(self) -> dict:
        return {
            'lambda': self.lam, 'kappa': self.kappa, 'grid': self.grid, 'collar': self.collar,
            'points': self.points, 'contained': self.contained, 'margin': self.margin,
            'min_expansion': self.min_expansion, 'passed': self.passed,
        }


def cone_vectors(kappa: float) -> np.ndarray:
    #two boundary directions and the core, in the w = (du, 2 pi dv) frame
    return np.array([[kappa, 1.0], [-kappa, 1.0], [0.0, 1.0]])


def cone_images(jacobians: np.ndarray, kappa: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Containment flag, margin and expansion per scaled Jacobian in a (n, 2, 2) stack."""
    w = cone_vectors(kappa)
    images = np.einsum('nij,mj->nmi', jacobians, w)
    w2 = images[:, :2, 1]
    same_side = (w2[:, 0] * w2[:, 1]) > 0
    with np.errstate(divide='ignore', invalid='ignore'):
        slopes = np.abs(images[:, :2, 0] / w2)
    slopes = np.where(np.isfinite(slopes), slopes, np.inf)
    widest = np.arctan(slopes.max(axis=1))
    margin = math.atan(kappa) - widest
    contained = same_side & (margin > 0)
    expansion = (np.linalg.norm(images, axis=2) / np.linalg.norm(w, axis=1)[None, :]).min(axis=1)
    return contained, margin, expansion


def cone_margin(jacobian: np.ndarray, kappa: float) -> Tuple[bool, float, float]:
    contained, margin, expansion = cone_images(jacobian[None, :, :], kappa)
    return bool(contained[0]), float(margin[0]), float(expansion[0])


def _grid(component_period: float, grid: int) -> Tuple[np.ndarray, np.ndarray]:
    u = (np.arange(grid) + 0.5) * component_period / grid
    v = (np.arange(grid) + 0.5) / grid
    uu, vv = np.meshgrid(u, v, indexing='ij')
    return uu.ravel(), vv.ravel()


def _near_seams(u: np.ndarray, collar: float) -> np.ndarray:
    return np.abs(u - PI * np.round(u / PI)) < collar


def verify_cones(sys: ReturnMapSystem, grid: int = CONE_GRID, collar: float = STABLE_COLLAR,
                 keep_rows: bool = False) -> ConeReport:
    contained = True
    margin = math.inf
    expansion = math.inf
    points = 0
    rows: List[np.ndarray] = []
    for source in sys.source_components():
        glue = sys.glue(source.index)
        u, v = _grid(source.period, grid)
        u2, _ = glue.apply(u, v)
        u2 = np.mod(u2, glue.target.period)
        keep = ~_near_seams(u2, collar) & ~_near_seams(u, collar)
        u, v, u2 = u[keep], v[keep], u2[keep]
        if not len(u):
            continue
        ok, gap, growth = cone_images(sys.scaled_jacobians_at(source.index, u2), sys.kappa)
        contained = contained and bool(ok.all())
        margin = min(margin, float(gap.min()))
        expansion = min(expansion, float(growth.min()))
        points += len(u)
        if keep_rows:
            rows.append(np.column_stack([u, v, gap, growth]))

    if points == 0:
        raise ReturnMapError("cone grid is empty after removing the collar")
    report = ConeReport(sys.lam, sys.kappa, grid, collar, points, contained, margin, expansion,
                        np.vstack(rows) if rows else np.empty((0, 4)))
    logger.debug(f"Cones at lambda={sys.lam:.6g}: contained={contained} margin={margin:.6g} "
                 f"expansion={expansion:.6g}")
    return report


def estimate_lambda0(sys: ReturnMapSystem, kappa: Optional[float] = None, grid: int = CONE_GRID,
                     bracket: Tuple[float, float] = LAMBDA_BRACKET,
                     rel_tol: float = LAMBDA_REL_TOL) -> float:
    """Smallest certifiable lambda on the grid, by bisection in log space."""
    template = sys if kappa is None else sys.with_kappa(kappa)
    lo, hi = bracket

    def passes(lam: float) -> bool:
        return verify_cones(template.with_lambda(lam), grid).passed

    if not passes(hi):
        raise ReturnMapError(f"not certifiable at this grid: cones fail at lambda={hi}")
    if passes(lo):
        return lo
    while hi / lo - 1 > rel_tol:
        mid = math.sqrt(lo * hi)
        if passes(mid):
            hi = mid
        else:
            lo = mid
    logger.info(f"Estimated lambda0={hi:.6g} (kappa={template.kappa}, grid={grid})")
    return hi


def two_step_margins(sys: ReturnMapSystem, points: Sequence[Tuple[int, float, float]]
                     ) -> List[Tuple[float, float]]:
    #(margin of D phi at phi(p), margin of D phi^2 at p) for points whose orbit survives two steps
    pairs = []
    for component, u, v in points:
        first = sys.step(component, u, v)
        if not isinstance(first, ReturnStep):
            continue
        j1 = sys.scaled_jacobian(component, u, v)
        j2 = sys.scaled_jacobian(*first.point)
        _, single, _ = cone_margin(j2, sys.kappa)
        _, double, _ = cone_margin(j2 @ j1, sys.kappa)
        pairs.append((single, double))
    return pairs


def jacobian_spot_check(sys: ReturnMapSystem, n: int = JACOBIAN_SAMPLES, seed: int = RANDOM_SEED,
                        max_abs_x: float = 1.0) -> float:
    """Largest entrywise gap between the exact and finite-difference Jacobians at seeded points.

    Entries are compared relative to max(1, |exact|).
    """
    worst = 0.0
    for component, u, v in sample_domain_points(sys, n, seed, max_abs_x):
        exact = sys.jacobian(component, u, v)
        approx = finite_difference_jacobian(sys, component, u, v)
        worst = max(worst, float(np.max(np.abs(approx - exact) / np.maximum(1.0, np.abs(exact)))))
    logger.debug(f"Jacobian spot check over {n} points (seed {seed}): worst gap {worst:.3g}")
    return worst
