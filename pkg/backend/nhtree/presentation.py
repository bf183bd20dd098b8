"""Finite presentations of non-Hausdorff trees.

Consecutive points of a segment bound an open edge. Each open edge has two
end-sets, the points it limits onto at either end; a non-separation witness
adds a second point to one end-set. The incidence graph joins every edge to
the points of its end-sets, and a presentation is valid exactly when that
graph is a tree.
"""
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx

from config import NH_WINDOW_RADIUS

logger = logging.getLogger(__name__)

EdgeKey = Tuple[str, str]
Node = Tuple[str, object]  # ('point', name) or ('edge', EdgeKey)

_REF = re.compile(r"^([A-Za-z0-9_.+\-]+?)(?:@(-?\d+))?$")


class PresentationError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class Witness:
    a: str
    b: str
    segment: str


def point_node(name: str) -> Node:
    return ('point', name)


def edge_node(key: EdgeKey) -> Node:
    return ('edge', key)


class NHTree:
    def __init__(self, points: Iterable[str], segments: Dict[str, Tuple[str, ...]],
                 witnesses: Iterable[Witness] = (), window: Optional[int] = None):
        self.points: List[str] = list(points)
        self.segments = dict(segments)
        self.witnesses = list(witnesses)
        self.window = window
        self.shift: Optional['TreeAutomorphism'] = None
        self.end_sets: Dict[EdgeKey, Tuple[Set[str], Set[str]]] = {}
        self._check_segments()
        self._build_edges()
        self._apply_witnesses()
        self.incidence = self._incidence_graph()
        self._check_separation()

    def _check_segments(self) -> None:
        known = set(self.points)
        if len(known) != len(self.points):
            raise PresentationError("duplicate point")
        for sid, seq in self.segments.items():
            if len(seq) < 2:
                raise PresentationError(f"segment {sid} needs at least two points")
            if len(set(seq)) != len(seq):
                raise PresentationError(f"segment {sid} repeats a point")
            missing = [p for p in seq if p not in known]
            if missing:
                raise PresentationError(f"segment {sid} uses undefined point {missing[0]}")
        ids = sorted(self.segments)
        for i, first in enumerate(ids):
            for second in ids[i + 1:]:
                if not _consistent_overlap(self.segments[first], self.segments[second]):
                    raise PresentationError(f"segments {first} and {second} overlap inconsistently")

    def _build_edges(self) -> None:
        for seq in self.segments.values():
            for p, q in zip(seq, seq[1:]):
                key = edge_key(p, q)
                self.end_sets.setdefault(key, ({key[0]}, {key[1]}))

    def _apply_witnesses(self) -> None:
        for w in self.witnesses:
            if w.a == w.b:
                raise PresentationError(f"point {w.a} cannot witness non-separation with itself")
            seq = self.segments.get(w.segment)
            if seq is None:
                raise PresentationError(f"witness {w.a} ~ {w.b} names unknown segment {w.segment}")
            if w.b not in set(self.points):
                raise PresentationError(f"witness uses undefined point {w.b}")
            if w.a not in (seq[0], seq[-1]):
                raise PresentationError(f"{w.a} is not an endpoint of segment {w.segment}")
            if w.b in seq:
                raise PresentationError(f"{w.b} already lies on segment {w.segment}")
            near = seq[1] if seq[0] == w.a else seq[-2]
            key = edge_key(near, w.a)
            self.end_sets[key][key.index(w.a)].add(w.b)

    def _incidence_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(point_node(p) for p in self.points)
        for key, ends in self.end_sets.items():
            for end in ends:
                for p in end:
                    graph.add_edge(edge_node(key), point_node(p))
        return graph

    def _check_separation(self) -> None:
        if not nx.is_connected(self.incidence):
            raise PresentationError("presentation is not arcwise connected")
        if not nx.is_forest(self.incidence):
            cycle = nx.find_cycle(self.incidence)
            names = [str(n[1]) for n, _ in cycle if n[0] == 'point']
            raise PresentationError(f"separation axiom fails around {' '.join(names)}")

    def edges_of(self, point: str) -> List[EdgeKey]:
        return sorted(n[1] for n in self.incidence.neighbors(point_node(point)))

    def end_of(self, key: EdgeKey, point: str) -> int:
        for i, end in enumerate(self.end_sets[key]):
            if point in end:
                return i
        raise KeyError(f"{point} is not at an end of edge {key}")

    def edge_signature(self, key: EdgeKey) -> FrozenSet[FrozenSet[str]]:
        return frozenset(frozenset(end) for end in self.end_sets[key])

    def require_point(self, point: str) -> None:
        if point_node(point) not in self.incidence:
            raise PresentationError(f"unknown point '{point}'")

    @property
    def hausdorff(self) -> bool:
        return not self.witnesses


def edge_key(p: str, q: str) -> EdgeKey:
    return (p, q) if p <= q else (q, p)


def _consistent_overlap(first: Tuple[str, ...], second: Tuple[str, ...]) -> bool:
    common = [p for p in first if p in set(second)]
    if len(common) <= 1:
        return True
    i = [first.index(p) for p in common]
    j = [second.index(p) for p in common]
    if i != list(range(i[0], i[0] + len(i))):
        return False
    steps = {b - a for a, b in zip(j, j[1:])}
    return steps in ({1}, {-1})


@dataclass
class TreeAutomorphism:
    mapping: Dict[str, str]  # partial on windowed presentations
    name: str = 'gamma'
    _inverse: Dict[str, str] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._inverse = {q: p for p, q in self.mapping.items()}
        if len(self._inverse) != len(self.mapping):
            raise PresentationError(f"automorphism {self.name} is not injective")

    def __call__(self, point: Optional[str]) -> Optional[str]:
        return None if point is None else self.mapping.get(point)

    def inverse(self) -> 'TreeAutomorphism':
        return TreeAutomorphism(dict(self._inverse), f"{self.name}^-1")

    def power(self, point: Optional[str], n: int) -> Optional[str]:
        step = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            point = step(point)
        return point


def check_automorphism(tree: NHTree, gamma: TreeAutomorphism) -> None:
    """Every edge whose image lies in the presentation must map onto an edge."""
    signatures = {tree.edge_signature(k) for k in tree.end_sets}
    for p, q in gamma.mapping.items():
        tree.require_point(p)
        tree.require_point(q)
    for key, ends in tree.end_sets.items():
        images = [{gamma(p) for p in end} for end in ends]
        if any(None in image for image in images):
            continue
        if frozenset(frozenset(i) for i in images) not in signatures:
            raise PresentationError(f"{gamma.name} does not carry edge {key[0]}-{key[1]} onto an edge")


#file parsing

def _ref(token: str, periodic: bool, number: int) -> Tuple[str, int]:
    match = _REF.match(token)
    if not match:
        raise PresentationError(f"malformed point reference '{token}'", number)
    offset = int(match.group(2)) if match.group(2) is not None else 0
    if offset and not periodic:
        raise PresentationError(f"copy offset in '{token}' needs a periodic presentation", number)
    return match.group(1), offset


def _copy(name: str, n: int) -> str:
    return f"{name}@{n}"


def parse_presentation(text: str, window: int = NH_WINDOW_RADIUS) -> NHTree:
    """Read a presentation; periodic files are unrolled over copies -window..window."""
    lines = []
    periodic_line = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if line.startswith('periodic'):
            if periodic_line is not None:
                raise PresentationError("second periodic declaration", number)
            periodic_line = (number, line)
        else:
            lines.append((number, line))
    periodic = periodic_line is not None

    points: List[str] = []
    segments: Dict[str, Tuple[Tuple[str, int], ...]] = {}
    witnesses: List[Tuple[Tuple[str, int], Tuple[str, int], str, int]] = []
    for number, line in lines:
        directive, _, rest = line.partition(' ')
        if directive == 'point':
            names = rest.split()
            if not names:
                raise PresentationError("point directive without a name", number)
            for name in names:
                if name in points:
                    raise PresentationError(f"duplicate point '{name}'", number)
                points.append(name)
        elif directive == 'segment':
            sid, colon, body = rest.partition(':')
            sid = sid.strip()
            if not colon or not sid:
                raise PresentationError(f"malformed segment directive: {line!r}", number)
            if sid in segments:
                raise PresentationError(f"duplicate segment '{sid}'", number)
            segments[sid] = tuple(_ref(t, periodic, number) for t in body.split())
        elif directive == 'nonsep':
            parts = rest.split()
            if len(parts) != 4 or parts[2] != 'via':
                raise PresentationError(f"malformed nonsep directive: {line!r}", number)
            witnesses.append((_ref(parts[0], periodic, number), _ref(parts[1], periodic, number),
                              parts[3], number))
        else:
            raise PresentationError(f"unknown directive '{directive}'", number)

    known = set(points)
    for sid, refs in segments.items():
        for name, _ in refs:
            if name not in known:
                raise PresentationError(f"segment {sid} uses undefined point {name}")
    for a, b, sid, number in witnesses:
        for name, _ in (a, b):
            if name not in known:
                raise PresentationError(f"nonsep uses undefined point {name}", number)
        if sid not in segments:
            raise PresentationError(f"nonsep names unknown segment {sid}", number)
        if a == b:
            raise PresentationError(f"point {a[0]} cannot witness non-separation with itself", number)

    if not periodic:
        tree = NHTree(points, {s: tuple(n for n, _ in refs) for s, refs in segments.items()},
                      [Witness(a[0], b[0], sid) for a, b, sid, _ in witnesses])
        logger.info(f"Loaded presentation: {len(tree.points)} points, {len(tree.segments)} segments")
        return tree

    shift = _parse_shift(periodic_line, known)
    copies = range(-window, window + 1)
    unrolled_points = [_copy(p, n) for n in copies for p in points]
    present = set(unrolled_points)
    unrolled_segments: Dict[str, Tuple[str, ...]] = {}
    for n in copies:
        for sid, refs in segments.items():
            names = tuple(_copy(name, n + k) for name, k in refs)
            if all(p in present for p in names):
                unrolled_segments[_copy(sid, n)] = names
    unrolled_witnesses = []
    for n in copies:
        for a, b, sid, _ in witnesses:
            pa, pb, seg = _copy(a[0], n + a[1]), _copy(b[0], n + b[1]), _copy(sid, n)
            if pa in present and pb in present and seg in unrolled_segments:
                unrolled_witnesses.append(Witness(pa, pb, seg))
    tree = NHTree(unrolled_points, unrolled_segments, unrolled_witnesses, window)
    mapping = {}
    for n in copies:
        for p in points:
            q, k = shift[p]
            if _copy(q, n + k) in present:
                mapping[_copy(p, n)] = _copy(q, n + k)
    tree.shift = TreeAutomorphism(mapping, 'shift')
    check_automorphism(tree, tree.shift)
    logger.info(f"Unrolled periodic presentation over window {window}: {len(tree.points)} points")
    return tree


def _parse_shift(periodic_line: Tuple[int, str], known: Set[str]) -> Dict[str, Tuple[str, int]]:
    number, line = periodic_line
    head, colon, body = line.partition(':')
    if head.split() != ['periodic', 'shift'] or not colon:
        raise PresentationError(f"malformed periodic declaration: {line!r}", number)
    shift = {p: (p, 1) for p in known}
    for item in body.split():
        source, arrow, target = item.partition('>')
        if not arrow:
            raise PresentationError(f"malformed shift item '{item}'", number)
        name, k = _ref(target, True, number)
        if source not in known or name not in known:
            raise PresentationError(f"shift item '{item}' uses an undefined point", number)
        shift[source] = (name, k)
    return shift


def parse_automorphism(text: str, tree: NHTree, name: str = 'gamma') -> TreeAutomorphism:
    """Read `map p q[@k]` lines; unmapped points are fixed, periodic maps repeat in every copy."""
    base: Dict[str, Tuple[str, int]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != 'map' or len(parts) != 3:
            raise PresentationError(f"malformed automorphism line: {line!r}", number)
        if parts[1] in base:
            raise PresentationError(f"point {parts[1]} mapped twice", number)
        base[parts[1]] = _ref(parts[2], tree.window is not None, number)

    if tree.window is None:
        mapping = {p: p for p in tree.points}
        for p, (q, _) in base.items():
            mapping[p] = q
    else:
        present = set(tree.points)
        mapping = {}
        for point in tree.points:
            stem, _, copy = point.rpartition('@')
            q, k = base.get(stem, (stem, 0))
            target = _copy(q, int(copy) + k)
            if target in present:
                mapping[point] = target
    gamma = TreeAutomorphism(mapping, name)
    check_automorphism(tree, gamma)
    return gamma
