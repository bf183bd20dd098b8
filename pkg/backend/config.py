from typing import Final, Optional, Tuple
from dataclasses import dataclass

#shear and cone parameters
DEFAULT_LAMBDA: Final[float] = 50.0
DEFAULT_KAPPA: Final[float] = 0.2  # cone half-slope around the fiber
EXPANSION_TARGET: Final[float] = 2.0
RANDOM_SEED: Final[int] = 0  #good for reproduction

#numeric guards
WALL_CUTOFF: Final[float] = 1e-8  # |x| <= pi/2 - cutoff
SEAM_TOL: Final[float] = 1e-12
NEAR_SINGULAR_TOL: Final[float] = 1e-8
FD_STEP: Final[float] = 1e-6

#block integration
RK4_STEP: Final[float] = 1e-3
EVENT_TOL: Final[float] = 1e-13
NON_EXIT_TIME_BUDGET: Final[float] = 50.0  # time units before giving up on an orbit

#cone verification and lambda bisection
CONE_GRID: Final[int] = 200  # cells per side of each annulus grid
STABLE_COLLAR: Final[float] = 1e-3
LAMBDA_BRACKET: Final[Tuple[float, float]] = (1e-3, 1e4)
LAMBDA_REL_TOL: Final[float] = 0.005

#stable curve pullbacks
MAX_GENERATION: Final[int] = 8
CURVE_CLIP: Final[float] = 1e-3
CURVE_RESOLUTION: Final[float] = 0.1  # strand spacing and merge cell of pulled back curves
CURVE_BASE_SAMPLES: Final[int] = 65
MAX_CURVES: Final[int] = 200_000
DENSITY_BOX: Final[float] = 0.1

#orbit space combinatorics
FAT_TREE_RADIUS: Final[int] = 3
SKEW_BFS_DEPTH: Final[int] = 12
NH_WINDOW_RADIUS: Final[int] = 4
SYMMETRY_SAMPLES: Final[int] = 100
JACOBIAN_SAMPLES: Final[int] = 20

#debug/Logging configuration
VERBOSE_LOGGING: Final[bool] = False


@dataclass
class Config:
    lam: float = DEFAULT_LAMBDA
    kappa: float = DEFAULT_KAPPA
    grid: int = CONE_GRID
    collar: float = STABLE_COLLAR
    generations: int = 4
    radius: int = FAT_TREE_RADIUS
    window: int = NH_WINDOW_RADIUS
    seed: int = RANDOM_SEED
    rk4_step: float = RK4_STEP
    time_budget: float = NON_EXIT_TIME_BUDGET
    curve_resolution: float = CURVE_RESOLUTION
    density_box: float = DENSITY_BOX
    out_dir: Optional[str] = None
    structured: bool = False
    verbose_logging: bool = VERBOSE_LOGGING

    #alias matching the cli flag
    @property
    def lambda_(self) -> float:
        return self.lam


def validate_config(config: Optional[Config] = None) -> None:
    config = config if config else Config()
    if not (config.lam > 0):
        raise ValueError("lambda must be positive")
    if not (0 < config.kappa):
        raise ValueError("kappa must be positive")
    if not (2 <= config.grid <= 5000):
        raise ValueError("grid must be between 2 and 5000 cells")
    if not (0 < config.collar < 0.5):
        raise ValueError("collar must be between 0 and 0.5")
    if not (0 <= config.generations <= MAX_GENERATION):
        raise ValueError(f"generations must be between 0 and {MAX_GENERATION}")
    if config.radius < 0:
        raise ValueError("radius must be non-negative")
    if config.window < 1:
        raise ValueError("window radius must be at least 1")
    if not (0 < config.rk4_step < 0.1):
        raise ValueError("rk4 step must be between 0 and 0.1")
    if config.time_budget <= 0:
        raise ValueError("time budget must be positive")
    if not (0 < config.curve_resolution < 1):
        raise ValueError("curve resolution must be between 0 and 1")
    if not (0 < config.density_box < 1):
        raise ValueError("density box must be between 0 and 1")
    if not (LAMBDA_BRACKET[0] < LAMBDA_BRACKET[1]):
        raise ValueError("LAMBDA_BRACKET must be a valid range")
