import logging
import random
import re
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from block_flow.model_block import vector_field
from closure.gluing import GluingSpec
from config import RANDOM_SEED

logger = logging.getLogger(__name__)

PRESENTATION_FAULTS = ('cycle', 'self_witness', 'overlap')
GLUING_FAULTS = ('fiber', 'determinant')


@dataclass
class FaultConfig:
    field_amplitude: float = 1e-3
    presentation_kinds: Tuple[str, ...] = PRESENTATION_FAULTS
    gluing_kinds: Tuple[str, ...] = GLUING_FAULTS
    max_entry: int = 9


class FaultInjector:
    """Seeded negative controls: each method returns a broken copy of valid input."""

    def __init__(self, seed: int = RANDOM_SEED, config: Optional[FaultConfig] = None):
        self.config = config if config else FaultConfig()
        self.rng = random.Random(seed)
        self.injected: List[str] = []
        self.logger = logging.getLogger(f"{__name__}.FaultInjector")

        self.logger.info(f"Fault injector initialised with seed {seed} and config: {self.config}")

    def perturbed_field(self, amplitude: Optional[float] = None) -> Callable[[np.ndarray, float], np.ndarray]:
        #adds a term even in x and not rotation invariant in y
        amplitude = self.config.field_amplitude if amplitude is None else amplitude
        phase = self.rng.uniform(0.0, 2 * np.pi)

        def field(p: np.ndarray, lam: float) -> np.ndarray:
            out = vector_field(p, lam)
            x, y = p[..., 0], p[..., 1]
            out[..., 1] += amplitude * (1.0 + np.sin(2 * np.pi * y + phase)) * np.cos(x)
            return out

        self.injected.append('field')
        self.logger.debug(f"Perturbed vector field with amplitude {amplitude}")
        return field

    def corrupt_presentation(self, text: str, kind: Optional[str] = None) -> Tuple[str, str]:
        kind = kind if kind else self.rng.choice(self.config.presentation_kinds)
        points, segments = _scan_presentation(text)
        if not segments:
            raise ValueError("presentation has no segment to corrupt")
        sid = self.rng.choice(sorted(segments))
        seq = segments[sid]

        if kind == 'cycle':
            pairs = [(p, q) for i, p in enumerate(points) for q in points[i + 1:]
                     if not any(p in s and q in s for s in segments.values())]
            if not pairs:
                raise ValueError("no pair of points to close a cycle with")
            p, q = self.rng.choice(pairs)
            extra = f"segment fault_cycle: {p} {q}"
        elif kind == 'self_witness':
            a = self.rng.choice([seq[0], seq[-1]])
            extra = f"nonsep {a} {a} via {sid}"
        elif kind == 'overlap':
            extra = f"point fault_z\nsegment fault_overlap: {seq[0]} fault_z {seq[-1]}"
        else:
            raise ValueError(f"unknown presentation fault '{kind}'")

        self.injected.append(kind)
        self.logger.info(f"Injecting presentation fault '{kind}': {extra.splitlines()[-1]}")
        return kind, text.rstrip('\n') + '\n' + extra + '\n'

    def corrupt_gluing(self, spec: GluingSpec, kind: Optional[str] = None) -> Tuple[str, GluingSpec]:
        kind = kind if kind else self.rng.choice(self.config.gluing_kinds)
        top = self.config.max_entry
        if kind == 'fiber':
            matrix = (1, 0, self.rng.randint(1, top), 1)
        elif kind == 'determinant':
            while True:
                matrix = tuple(self.rng.randint(-top, top) for _ in range(4))
                a, b, c, d = matrix
                if b != 0 and a * d - b * c not in (-1, 1):
                    break
        else:
            raise ValueError(f"unknown gluing fault '{kind}'")
        pairs = list(spec.pairs)
        index = self.rng.randrange(len(pairs))
        pairs[index] = replace(pairs[index], matrix=matrix)
        self.injected.append(kind)
        self.logger.info(f"Injecting gluing fault '{kind}': L={matrix} on pair {index}")
        return kind, GluingSpec(tuple(pairs), spec.surgeries)

    def get_injected(self) -> List[str]:
        return list(self.injected)


def _scan_presentation(text: str) -> Tuple[List[str], Dict[str, List[str]]]:
    points: List[str] = []
    segments: Dict[str, List[str]] = {}
    for raw in text.splitlines():
        line = raw.split('#', 1)[0].strip()
        if line.startswith('point '):
            points.extend(line.split()[1:])
        match = re.match(r"^segment\s+(\S+)\s*:\s*(.*)$", line)
        if match:
            segments[match.group(1)] = match.group(2).split()
    return points, segments
