import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple, Union

import numpy as np
import sympy as sp

from config import WALL_CUTOFF

logger = logging.getLogger(__name__)

HALF_PI = np.pi / 2
ArrayLike = Union[float, np.ndarray]


class BlockDomainError(ValueError):
    pass


@dataclass(frozen=True)
class BlockPoint:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if abs(self.x) > HALF_PI + 1e-15 or abs(self.z) > HALF_PI + 1e-15:
            raise BlockDomainError(f"point ({self.x}, {self.y}, {self.z}) outside the block")
        object.__setattr__(self, 'y', float(self.y) % 1.0)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


@dataclass(frozen=True)
class ShearProfile:
    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise BlockDomainError(f"shear strength must be positive, got {self.lam}")

    def a(self, x: ArrayLike) -> ArrayLike:
        return exit_shear(x, self.lam)

    def da(self, x: ArrayLike) -> ArrayLike:
        return exit_shear_derivative(x, self.lam)


def _check_open(x: ArrayLike, what: str) -> None:
    if np.any(np.abs(x) > HALF_PI - WALL_CUTOFF):
        raise BlockDomainError(f"{what} diverges on the tangential walls |x| = pi/2")


def circle_distance(a: ArrayLike, b: ArrayLike) -> ArrayLike:
    d = np.abs(np.mod(np.asarray(a) - np.asarray(b), 1.0))
    return np.minimum(d, 1.0 - d)


def vector_field(p: np.ndarray, lam: float) -> np.ndarray:
    #works on a single (3,) state or a (..., 3) stack of states
    x, z = p[..., 0], p[..., 2]
    sx = np.sin(x)
    cz = np.cos(z)
    sz = np.sin(z)
    cx = np.cos(x)
    out = np.empty(np.shape(p), dtype=float)
    out[..., 0] = 0.0
    out[..., 1] = lam * sx * cz * cz
    out[..., 2] = cx * cx + sz * sz * sx * sx
    return out


def transit_time(x: ArrayLike) -> ArrayLike:
    _check_open(x, "transit time")
    return np.pi / np.abs(np.cos(x))


def exit_shear(x: ArrayLike, lam: float) -> ArrayLike:
    _check_open(x, "exit shear")
    return lam * np.pi * (np.tan(x) - np.tan(np.asarray(x) / 2))


def exit_shear_derivative(x: ArrayLike, lam: float) -> ArrayLike:
    #lam*pi*(1/2 + tan^2 x - tan^2(x/2)/2), always >= lam*pi/2
    _check_open(x, "exit shear derivative")
    t = np.tan(x)
    h = np.tan(np.asarray(x) / 2)
    return lam * np.pi * (0.5 + t * t - 0.5 * h * h)


def exit_map(x: ArrayLike, y: ArrayLike, lam: float) -> Tuple[ArrayLike, ArrayLike]:
    return x, np.mod(y + exit_shear(x, lam), 1.0)


def inverse_exit_map(x: ArrayLike, y: ArrayLike, lam: float) -> Tuple[ArrayLike, ArrayLike]:
    return x, np.mod(y - exit_shear(x, lam), 1.0)


@lru_cache(maxsize=1)
def shear_derivative_symbolic() -> Tuple[sp.Expr, sp.Expr]:
    """Symbolic a(x) and its derivative, with lambda kept as a symbol."""
    x, lam = sp.symbols('x lam', real=True)
    a = lam * sp.pi * (sp.tan(x) - sp.tan(x / 2))
    return a, sp.diff(a, x)


def closed_form_matches_symbolic(samples: np.ndarray, lam: float = 1.0) -> float:
    #max abs gap between the closed-form derivative and the sympy one
    x, lam_sym = sp.symbols('x lam', real=True)
    _, derivative = shear_derivative_symbolic()
    numeric = sp.lambdify((x, lam_sym), derivative, 'numpy')
    return float(np.max(np.abs(numeric(samples, lam) - exit_shear_derivative(samples, lam))))


@dataclass(frozen=True)
class QuotientBlock:
    k: int
    one_prong_orbits: int
    manifold: str  # 'T2 x I' for even k, 'K x I' for odd k


def quotient_block(k: int) -> QuotientBlock:
    #the universal block modulo tau^k, tau(x, y, z) = (x + pi, -y, z)
    if k < 1:
        raise BlockDomainError("k must be at least 1")
    return QuotientBlock(k, k, 'T2 x I' if k % 2 == 0 else 'K x I')
