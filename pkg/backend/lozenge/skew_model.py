import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple, Union

from config import SKEW_BFS_DEPTH
from lozenge.fat_tree import LozengeError

logger = logging.getLogger(__name__)

Number = Union[int, Fraction, str]


@dataclass(frozen=True, order=True)
class SkewOrbit:
    """The orbit U_d meet L_c in the strip {x < y < x + 1}."""
    d: Fraction
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'd', Fraction(self.d))
        object.__setattr__(self, 'c', Fraction(self.c))
        if not self.c - 1 < self.d < self.c:
            raise LozengeError(f"({self.d}, {self.c}) is not in the strip: need c - 1 < d < c")

    def __str__(self) -> str:
        return f"({self.d}, {self.c})"

    def shifted(self, n: int) -> 'SkewOrbit':
        return SkewOrbit(self.d + n, self.c + n)


class Leaf(Enum):
    STABLE = "L"
    UNSTABLE = "U"


def tau_s(c: Fraction) -> Fraction:
    return c + 1


def tau_u(d: Fraction) -> Fraction:
    return d + 1


def eta(kind: Leaf, value: Fraction) -> Tuple[Leaf, Fraction]:
    #perfect fits: L_c with U_c, and U_d with L_(d+1)
    if kind is Leaf.STABLE:
        return Leaf.UNSTABLE, value
    return Leaf.STABLE, tau_s(value)


def skew_partner(o: SkewOrbit) -> SkewOrbit:
    _, d_new = eta(Leaf.STABLE, o.c)
    _, c_new = eta(Leaf.UNSTABLE, o.d)
    return SkewOrbit(d_new, c_new)


def skew_partner_inverse(o: SkewOrbit) -> SkewOrbit:
    return SkewOrbit(o.c - 1, o.d)


def lozenge_corners(o: SkewOrbit) -> Tuple[SkewOrbit, SkewOrbit]:
    return o, skew_partner(o)


def nu(o: SkewOrbit) -> Tuple[Fraction, Fraction]:
    return o.c % 1, o.d % 1


class Connection(Enum):
    EVEN = "connected-even"
    ODD = "connected-odd"
    NONE = "not-connected"


@dataclass(frozen=True)
class SkewConnection:
    kind: Connection
    length: Optional[int]  # number of lozenges in a shortest chain


def closed_form_connection(o1: SkewOrbit, o2: SkewOrbit) -> SkewConnection:
    shift = o2.d - o1.d
    if shift == o2.c - o1.c and shift.denominator == 1:
        return SkewConnection(Connection.EVEN, 2 * abs(int(shift)))
    #partner^(2n+1)(d, c) = (c + n, d + 1 + n)
    n = o2.d - o1.c
    if n == o2.c - o1.d - 1 and n.denominator == 1:
        return SkewConnection(Connection.ODD, abs(2 * int(n) + 1))
    return SkewConnection(Connection.NONE, None)


def bfs_chain_length(o1: SkewOrbit, o2: SkewOrbit, depth: int = SKEW_BFS_DEPTH) -> Optional[int]:
    seen = {o1: 0}
    queue = deque([o1])
    while queue:
        current = queue.popleft()
        if current == o2:
            return seen[current]
        if seen[current] == depth:
            continue
        for nxt in (skew_partner(current), skew_partner_inverse(current)):
            if nxt not in seen:
                seen[nxt] = seen[current] + 1
                queue.append(nxt)
    return None


def skew_chain_connected(o1: SkewOrbit, o2: SkewOrbit, depth: int = SKEW_BFS_DEPTH) -> SkewConnection:
    expected = closed_form_connection(o1, o2)
    found = bfs_chain_length(o1, o2, depth)
    if expected.length is not None and expected.length <= depth and found != expected.length:
        raise LozengeError(f"chain oracle disagrees for {o1} and {o2}: {found} vs {expected.length}")
    if expected.kind is Connection.NONE and found is not None:
        raise LozengeError(f"chain oracle connects {o1} and {o2} against the projection criterion")
    return expected


def parse_orbit(text: str) -> SkewOrbit:
    #"d,c" with rationals such as 1/2,6/5
    try:
        d, c = (Fraction(part.strip()) for part in text.split(','))
    except ValueError as e:
        raise LozengeError(f"cannot read orbit '{text}': expected d,c") from e
    return SkewOrbit(d, c)
