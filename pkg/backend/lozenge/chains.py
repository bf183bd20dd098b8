import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from lozenge.fat_tree import FatTreePatch, LozengeError, Word, vertex_name

logger = logging.getLogger(__name__)


class ScallopKind(Enum):
    S_SCALLOPED = "s-scalloped"
    U_SCALLOPED = "u-scalloped"
    NEITHER = "neither"


@dataclass(frozen=True)
class Corner:
    word: Word
    base: str
    p: int


@dataclass(frozen=True)
class Lozenge:
    corners: Tuple[Corner, Corner]
    adjacent_to_previous: bool = False
    shared_side: Optional[str] = None  # 's', 'u' or None


@dataclass(frozen=True)
class LozengeChain:
    lozenges: Tuple[Lozenge, ...]

    def __post_init__(self):
        for prev, lozenge in zip(self.lozenges, self.lozenges[1:]):
            shared = {c.word for c in prev.corners} & {c.word for c in lozenge.corners}
            if len(shared) != 1:
                raise LozengeError("consecutive lozenges must share exactly one corner")
            if lozenge.adjacent_to_previous and lozenge.shared_side not in ('s', 'u'):
                raise LozengeError("adjacent lozenges need a shared side type")
        if self.lozenges and self.lozenges[0].adjacent_to_previous:
            raise LozengeError("the first lozenge has no predecessor")

    def __len__(self) -> int:
        return len(self.lozenges)

    @property
    def corners(self) -> List[Corner]:
        if not self.lozenges:
            return []
        return [self.lozenges[0].corners[0]] + [z.corners[1] for z in self.lozenges]


def _corner(patch: FatTreePatch, word: Word) -> Corner:
    base = patch.base_of(word)
    return Corner(tuple(word), base, patch.bp.vertex(base).valence // 2)


def chain_along_path(patch: FatTreePatch, path: Sequence[Word]) -> LozengeChain:
    path = [tuple(w) for w in path]
    if len(path) < 2:
        raise LozengeError("a chain needs a path with at least one edge")
    if len(set(path)) != len(path):
        raise LozengeError("path revisits a vertex")
    for word in path:
        if word not in patch:
            raise LozengeError(f"vertex {'.'.join(word)} is outside the patch")
    for a, b in zip(path, path[1:]):
        if not patch.graph.has_edge(a, b):
            raise LozengeError(f"{vertex_name(patch, a)} and {vertex_name(patch, b)} are not joined by an edge")

    lozenges = [Lozenge((_corner(patch, path[0]), _corner(patch, path[1])))]
    for prev, shared, nxt in zip(path, path[1:], path[2:]):
        valence = patch.bp.vertex(patch.base_of(shared)).valence
        idx_in = patch.position_towards(shared, prev)
        idx_out = patch.position_towards(shared, nxt)
        labels = patch.labels[patch.base_of(shared)]
        side = None
        if idx_out == (idx_in + 1) % valence:
            side = labels[idx_in]
        elif idx_out == (idx_in - 1) % valence:
            side = labels[idx_out]
        lozenges.append(Lozenge((_corner(patch, shared), _corner(patch, nxt)), side is not None, side))
    chain = LozengeChain(tuple(lozenges))
    logger.debug(f"Chain of {len(chain)} lozenges, adjacency {[z.shared_side for z in chain.lozenges]}")
    return chain


def is_string(chain: LozengeChain) -> bool:
    return (all(c.p == 2 for c in chain.corners)
            and not any(z.adjacent_to_previous for z in chain.lozenges))


def is_scalloped(chain: LozengeChain) -> ScallopKind:
    #s-scalloped chains are adjacent along unstable sides, u-scalloped along stable ones
    if len(chain) < 2:
        raise LozengeError("scalloped chains need at least two lozenges")
    followers = chain.lozenges[1:]
    if not all(z.adjacent_to_previous for z in followers):
        return ScallopKind.NEITHER
    sides = {z.shared_side for z in followers}
    if sides == {'u'}:
        return ScallopKind.S_SCALLOPED
    if sides == {'s'}:
        return ScallopKind.U_SCALLOPED
    return ScallopKind.NEITHER
