import logging
import math
import re
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from assembly.manifold import AssembledManifold, TransverseComponent
from blueprint.fat_graph import Polarity
from blueprint.validation import ValidationReport

logger = logging.getLogger(__name__)

KLEIN_REASON = ("a linear transverse gluing needs every boundary component to be a torus; "
                "odd cycles give Klein bottles")

_MATCH = re.compile(r"^match\s+(\d+)\s+(\d+)\s+L=(-?\d+),(-?\d+),(-?\d+),(-?\d+)"
                    r"(?:\s+shift=([-+0-9.eE]+),([-+0-9.eE]+))?\s*$")
_SURGERY = re.compile(r"^surgery\s+(\S+)\s+m=(-?\d+),(-?\d+)\s*$")


class GluingError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, report: Optional[ValidationReport] = None):
        self.line = line
        self.report = report
        super().__init__(f"line {line}: {message}" if line else message)


class SurgeryError(ValueError):
    pass


@dataclass(frozen=True)
class GluingPair:
    out_component: int
    in_component: int
    matrix: Tuple[int, int, int, int]  # a, b, c, d in the (horizontal, fiber) bases
    shift: Tuple[float, float] = (0.0, 0.0)

    @property
    def det(self) -> int:
        a, b, c, d = self.matrix
        return a * d - b * c

    @property
    def b(self) -> int:
        return self.matrix[1]


@dataclass(frozen=True)
class SurgeryRecord:
    vertex: str
    p: int  # meridian coefficient
    q: int  # longitude coefficient

    @property
    def trivial(self) -> bool:
        return (self.p, self.q) in ((1, 0), (-1, 0))


@dataclass(frozen=True)
class GluingSpec:
    pairs: Tuple[GluingPair, ...]
    surgeries: Tuple[SurgeryRecord, ...] = field(default_factory=tuple)

    def pair_from(self, out_component: int) -> GluingPair:
        for pair in self.pairs:
            if pair.out_component == out_component:
                return pair
        raise GluingError(f"outgoing component {out_component} is not in the matching")

    def pair_into(self, in_component: int) -> GluingPair:
        for pair in self.pairs:
            if pair.in_component == in_component:
                return pair
        raise GluingError(f"incoming component {in_component} is not in the matching")

    def with_shifts(self, shifts: Iterable[Tuple[float, float]]) -> 'GluingSpec':
        pairs = tuple(replace(p, shift=tuple(s)) for p, s in zip(self.pairs, shifts))
        return GluingSpec(pairs, self.surgeries)


def surgery_record(vertex: str, p: int, q: int, vertices: Optional[Iterable[str]] = None) -> SurgeryRecord:
    #meridian p*m0 + q*l; the longitude (0, +-1) would kill the flow direction
    if vertices is not None and vertex not in set(vertices):
        raise SurgeryError(f"unknown vertex '{vertex}'")
    if math.gcd(p, q) != 1:
        raise SurgeryError(f"meridian ({p}, {q}) is not a primitive class")
    if p == 0:
        raise SurgeryError(f"meridian ({p}, {q}) is the longitude of the vertical orbit at {vertex}")
    return SurgeryRecord(vertex, p, q)


def parse_gluing(text: str) -> GluingSpec:
    pairs: List[GluingPair] = []
    surgeries: List[SurgeryRecord] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        directive = line.split(None, 1)[0]
        if directive == 'match':
            match = _MATCH.match(line)
            if not match:
                raise GluingError(f"malformed match directive: {line!r}", number)
            a, b, c, d = (int(match.group(i)) for i in range(3, 7))
            shift = (float(match.group(7)), float(match.group(8))) if match.group(7) else (0.0, 0.0)
            pairs.append(GluingPair(int(match.group(1)), int(match.group(2)), (a, b, c, d), shift))
        elif directive == 'surgery':
            match = _SURGERY.match(line)
            if not match:
                raise GluingError(f"malformed surgery directive: {line!r}", number)
            try:
                surgeries.append(surgery_record(match.group(1), int(match.group(2)), int(match.group(3))))
            except SurgeryError as e:
                raise GluingError(str(e), number) from e
        else:
            raise GluingError(f"unknown directive '{directive}'", number)
    if not pairs:
        raise GluingError("gluing declares no match")
    return GluingSpec(tuple(pairs), tuple(surgeries))


def format_gluing(spec: GluingSpec) -> str:
    lines = []
    for pair in spec.pairs:
        a, b, c, d = pair.matrix
        lines.append(f"match {pair.out_component} {pair.in_component} L={a},{b},{c},{d} "
                     f"shift={pair.shift[0]!r},{pair.shift[1]!r}")
    lines += [f"surgery {s.vertex} m={s.p},{s.q}" for s in spec.surgeries]
    return "\n".join(lines) + "\n"


def torus_bundle_gluing(L: Tuple[int, int, int, int], shift: Tuple[float, float] = (0.0, 0.0),
                        out_component: int = 1, in_component: int = 0) -> GluingSpec:
    #circle blueprints have cycle 0 incoming and cycle 1 outgoing
    return GluingSpec((GluingPair(out_component, in_component, tuple(L), tuple(shift)),))


class GluingMap:
    """Affine map between universal covers, A(u, v) = M (u, v) + (s, t).

    M = D' L D^-1 with D = diag(k*pi, 1), so L acts on the horizontal and fiber
    generators of the two tori.
    """

    def __init__(self, source: TransverseComponent, target: TransverseComponent,
                 matrix: Tuple[int, int, int, int], shift: Tuple[float, float]):
        self.source = source
        self.target = target
        a, b, c, d = matrix
        self.L = np.array([[a, b], [c, d]], dtype=float)
        D = np.diag([source.k * np.pi, 1.0])
        D_target = np.diag([target.k * np.pi, 1.0])
        self.M = D_target @ self.L @ np.linalg.inv(D)
        self.M_inv = np.linalg.inv(self.M)
        self.shift = np.array(shift, dtype=float)

    @property
    def scaled_matrix(self) -> np.ndarray:
        #in the norm frame w = (du, 2*pi*dv)
        S = np.diag([1.0, 2 * np.pi])
        return S @ self.M @ np.linalg.inv(S)

    def kappa_max(self) -> float:
        #largest cone slope whose image keeps a nonzero horizontal part
        m = self.scaled_matrix
        if m[0, 0] == 0:
            return math.inf
        return abs(m[0, 1]) / abs(m[0, 0])

    def apply(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return (self.M[0, 0] * u + self.M[0, 1] * v + self.shift[0],
                self.M[1, 0] * u + self.M[1, 1] * v + self.shift[1])

    def inverse(self, u, v):
        u = np.asarray(u, dtype=float) - self.shift[0]
        v = np.asarray(v, dtype=float) - self.shift[1]
        return (self.M_inv[0, 0] * u + self.M_inv[0, 1] * v,
                self.M_inv[1, 0] * u + self.M_inv[1, 1] * v)

    def inverted(self) -> 'GluingMap':
        inv = GluingMap.__new__(GluingMap)
        inv.source, inv.target = self.target, self.source
        inv.L = np.linalg.inv(self.L)
        inv.M, inv.M_inv = self.M_inv, self.M
        inv.shift = -self.M_inv @ self.shift
        return inv


def reduce_to_lattice(component: TransverseComponent, u, v):
    return np.mod(u, component.period), np.mod(v, 1.0)


def gluing_map(asm: AssembledManifold, pair: GluingPair) -> GluingMap:
    return GluingMap(asm.component(pair.out_component), asm.component(pair.in_component),
                     pair.matrix, pair.shift)


def validate_gluing(asm: AssembledManifold, spec: GluingSpec) -> ValidationReport:
    report = ValidationReport()
    outgoing = {c.index for c in asm.outgoing()}
    incoming = {c.index for c in asm.incoming()}
    report.details['outgoing'] = len(outgoing)
    report.details['incoming'] = len(incoming)

    if len(outgoing) != len(incoming):
        report.add('count_mismatch', f"{len(outgoing)} outgoing against {len(incoming)} incoming components")
    for component in sorted(asm.components.values(), key=lambda c: c.index):
        if not component.is_torus:
            report.add('klein_bottle', f"component {component.index} (k={component.k}) is a Klein bottle: "
                                       f"{KLEIN_REASON}", str(component.index))

    used_out: Dict[int, int] = {}
    used_in: Dict[int, int] = {}
    for pair in spec.pairs:
        subject = f"{pair.out_component}->{pair.in_component}"
        if pair.out_component not in outgoing:
            report.add('bad_component', f"{pair.out_component} is not an outgoing component", subject)
        if pair.in_component not in incoming:
            report.add('bad_component', f"{pair.in_component} is not an incoming component", subject)
        used_out[pair.out_component] = used_out.get(pair.out_component, 0) + 1
        used_in[pair.in_component] = used_in.get(pair.in_component, 0) + 1
        if pair.det not in (1, -1):
            report.add('determinant', f"det L = {pair.det}, expected +-1", subject)
        if pair.b == 0:
            report.add('fiber_preserved', "b = 0: A maps the fiber onto the fiber direction", subject)

    for index in sorted(outgoing):
        if used_out.get(index, 0) != 1:
            report.add('matching', f"outgoing component {index} matched {used_out.get(index, 0)} times",
                       str(index))
    for index in sorted(incoming):
        if used_in.get(index, 0) != 1:
            report.add('matching', f"incoming component {index} matched {used_in.get(index, 0)} times",
                       str(index))

    vertices = {v.id for v in asm.blueprint.vertices}
    for record in spec.surgeries:
        try:
            surgery_record(record.vertex, record.p, record.q, vertices)
        except SurgeryError as e:
            report.add('surgery', str(e), record.vertex)

    if not report.passed:
        logger.warning(f"Gluing rejected: {report.codes()}")
    return report


def require_valid(asm: AssembledManifold, spec: GluingSpec) -> None:
    report = validate_gluing(asm, spec)
    if not report.passed:
        raise GluingError("invalid gluing: " + "; ".join(v.message for v in report.violations), report=report)


def apply_gluing(asm: AssembledManifold, spec: GluingSpec, component: int, u: float, v: float):
    if asm.component(component).polarity is not Polarity.OUTGOING:
        raise GluingError(f"component {component} is not outgoing")
    pair = spec.pair_from(component)
    glue = gluing_map(asm, pair)
    u2, v2 = reduce_to_lattice(glue.target, *glue.apply(u, v))
    return pair.in_component, float(u2), float(v2)


def apply_inverse_gluing(asm: AssembledManifold, spec: GluingSpec, component: int, u: float, v: float):
    if asm.component(component).polarity is not Polarity.INCOMING:
        raise GluingError(f"component {component} is not incoming")
    pair = spec.pair_into(component)
    glue = gluing_map(asm, pair)
    u2, v2 = reduce_to_lattice(glue.source, *glue.inverse(u, v))
    return pair.out_component, float(u2), float(v2)


def kappa_max(asm: AssembledManifold, spec: GluingSpec, reverse: bool = False) -> float:
    maps = [gluing_map(asm, p) for p in spec.pairs]
    if reverse:
        maps = [m.inverted() for m in maps]
    return min(m.kappa_max() for m in maps)
