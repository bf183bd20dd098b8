import logging
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence, Tuple

import numpy as np

from block_flow.model_block import HALF_PI, BlockDomainError, BlockPoint, vector_field
from config import EVENT_TOL, NON_EXIT_TIME_BUDGET, RK4_STEP

logger = logging.getLogger(__name__)

FieldFn = Callable[[np.ndarray, float], np.ndarray]

_REFLECTION = np.array([-1.0, -1.0, 1.0])
_MAX_BISECTIONS = 80


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n, 3), y unwrapped
    exited: bool
    exit_face: Optional[str]

    @property
    def exit_time(self) -> Optional[float]:
        return float(self.times[-1]) if self.exited else None

    @property
    def exit_point(self) -> Optional[Tuple[float, float]]:
        if not self.exited:
            return None
        x, y, _ = self.states[-1]
        return float(x), float(y) % 1.0

    def rows(self) -> Iterator[Tuple[float, float, float, float]]:
        for t, (x, y, z) in zip(self.times, self.states):
            yield float(t), float(x), float(y) % 1.0, float(z)


@dataclass
class TransitBatch:
    x: np.ndarray
    times: np.ndarray
    exit_y: np.ndarray  # mod 1
    exited: np.ndarray


@dataclass
class SymmetryReport:
    samples: int
    rotation_residual: float
    reflection_residual: float

    def passed(self, tol: float = 1e-12) -> bool:
        return self.rotation_residual == 0.0 and self.reflection_residual <= tol


def rk4_step(states: np.ndarray, lam: float, h, field: FieldFn = vector_field) -> np.ndarray:
    #classical 4th order step; h may be a scalar or a (m, 1) column of step sizes
    k1 = field(states, lam)
    k2 = field(states + 0.5 * h * k1, lam)
    k3 = field(states + 0.5 * h * k2, lam)
    k4 = field(states + h * k3, lam)
    out = states + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    out[..., 0] = states[..., 0]  # x is a first integral
    return out


def _locate_exit(states: np.ndarray, lam: float, step: float) -> np.ndarray:
    #bisect the sub-step that lands on z = pi/2, vectorized over rows
    lo = np.zeros((states.shape[0], 1))
    hi = np.full((states.shape[0], 1), step)
    for _ in range(_MAX_BISECTIONS):
        if np.all(hi - lo <= EVENT_TOL):
            break
        mid = 0.5 * (lo + hi)
        above = rk4_step(states, lam, mid)[:, 2:3] >= HALF_PI
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return hi[:, 0]


def integrate_orbit(p: BlockPoint, lam: float, step: float = RK4_STEP,
                    time_budget: float = NON_EXIT_TIME_BUDGET, record_every: int = 1) -> Trajectory:
    if step <= 0:
        raise BlockDomainError("integration step must be positive")
    state = p.as_array()[None, :]
    t = 0.0
    times = [t]
    states = [state[0].copy()]
    if state[0, 2] >= HALF_PI:
        return Trajectory(np.array(times), np.array(states), True, 'F1')

    n = 0
    while t < time_budget:
        nxt = rk4_step(state, lam, step)
        if nxt[0, 2] >= HALF_PI:
            h = float(_locate_exit(state, lam, step)[0])
            final = rk4_step(state, lam, h)
            final[0, 2] = HALF_PI
            times.append(t + h)
            states.append(final[0])
            logger.debug(f"Orbit from {p} exits F1 at t={t + h:.9f}")
            return Trajectory(np.array(times), np.array(states), True, 'F1')
        state = nxt
        t += step
        n += 1
        if n % record_every == 0:
            times.append(t)
            states.append(state[0].copy())

    logger.info(f"Orbit from {p} did not exit within time budget {time_budget}")
    return Trajectory(np.array(times), np.array(states), False, None)


def transit_batch(xs: Sequence[float], lam: float, y0: float = 0.0, step: float = RK4_STEP,
                  time_budget: float = NON_EXIT_TIME_BUDGET) -> TransitBatch:
    """Integrate many orbits from F0 at once and record where they land on F1."""
    xs = np.asarray(xs, dtype=float)
    n = xs.size
    states = np.column_stack([xs, np.full(n, y0, dtype=float), np.full(n, -HALF_PI)])
    times = np.full(n, np.nan)
    exit_y = np.full(n, np.nan)
    active = np.ones(n, dtype=bool)
    t = 0.0
    while active.any() and t < time_budget:
        idx = np.flatnonzero(active)
        current = states[idx]
        nxt = rk4_step(current, lam, step)
        crossed = nxt[:, 2] >= HALF_PI
        if crossed.any():
            hit = idx[crossed]
            h = _locate_exit(current[crossed], lam, step)
            final = rk4_step(current[crossed], lam, h[:, None])
            times[hit] = t + h
            exit_y[hit] = np.mod(final[:, 1], 1.0)
            active[hit] = False
        states[idx[~crossed]] = nxt[~crossed]
        t += step
    return TransitBatch(xs, times, exit_y, ~active)


def sample_block_points(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.column_stack([
        rng.uniform(-HALF_PI, HALF_PI, n),
        rng.uniform(0.0, 1.0, n),
        rng.uniform(-HALF_PI, HALF_PI, n),
    ])


def check_symmetries(lam: float, samples: np.ndarray, field: FieldFn = vector_field,
                     rotations: Sequence[float] = (0.125, 0.37, 0.5)) -> SymmetryReport:
    samples = np.asarray(samples, dtype=float)
    base = field(samples, lam)

    rotation = 0.0
    for c in rotations:
        shifted = samples.copy()
        shifted[:, 1] = np.mod(shifted[:, 1] + c, 1.0)
        rotation = max(rotation, float(np.max(np.abs(field(shifted, lam) - base))))

    mirrored = samples * _REFLECTION
    reflection = float(np.max(np.abs(field(mirrored, lam) - base * _REFLECTION)))
    if reflection > 1e-12 or rotation > 0.0:
        logger.warning(f"Symmetry residuals: rotation={rotation:.3e} reflection={reflection:.3e}")
    return SymmetryReport(len(samples), rotation, reflection)
