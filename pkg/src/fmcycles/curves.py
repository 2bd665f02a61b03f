"""Combinatorial cycles E_N and chains I_k of projective lines.

Component ``i`` of a cycle meets component ``(i + 1) % N`` at node ``i``.
On every component the two nodes sit at coordinates 0 and infinity: node
``i - 1`` at 0 and node ``i`` at infinity.  Smooth points are therefore
given by a nonzero rational coordinate.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import MalformedInput


@dataclass(frozen=True)
class CycleCurve:
    """A cycle of ``n_components`` projective lines with a polarization.

    ``polarization[i]`` is the degree of the polarization on component i.
    When omitted every component gets degree 1.
    """

    n_components: int
    polarization: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not isinstance(self.n_components, int) or self.n_components < 1:
            raise MalformedInput(f"a cycle needs at least one component, got {self.n_components!r}")
        pol = tuple(self.polarization) or (1,) * self.n_components
        if len(pol) != self.n_components:
            raise MalformedInput(
                f"polarization has {len(pol)} entries for {self.n_components} components"
            )
        if any(not isinstance(h, int) or h < 1 for h in pol):
            raise MalformedInput(f"polarization degrees must be positive integers: {pol}")
        object.__setattr__(self, "polarization", pol)

    @property
    def total_degree(self) -> int:
        return sum(self.polarization)

    @property
    def n_nodes(self) -> int:
        return self.n_components

    def node_components(self, j: int) -> tuple[int, int]:
        """Components joined at node ``j``."""
        if not 0 <= j < self.n_components:
            raise MalformedInput(f"node index {j} out of range for E_{self.n_components}")
        return j, (j + 1) % self.n_components

    def cover(self, s: int) -> "CycleCurve":
        """The étale cover E_{sN} with the pulled-back polarization."""
        if s < 1:
            raise MalformedInput(f"cover degree must be positive, got {s}")
        return CycleCurve(s * self.n_components, self.polarization * s)

    def with_polarization(self, polarization) -> "CycleCurve":
        return CycleCurve(self.n_components, tuple(polarization))


@dataclass(frozen=True)
class ChainCurve:
    """A chain of ``length`` projective lines; node j joins components j, j+1."""

    length: int

    def __post_init__(self):
        if not isinstance(self.length, int) or self.length < 1:
            raise MalformedInput(f"a chain needs at least one component, got {self.length!r}")

    @property
    def n_components(self) -> int:
        return self.length

    @property
    def n_nodes(self) -> int:
        return self.length - 1


Curve = Union[CycleCurve, ChainCurve]


@dataclass(frozen=True)
class Arc:
    """A connected proper subcurve: ``length`` consecutive components from ``start``."""

    host: Curve
    start: int
    length: int

    def __post_init__(self):
        n = self.host.n_components
        if not 1 <= self.length < n:
            raise MalformedInput(f"arc length {self.length} is not proper in a curve with {n} components")
        if not 0 <= self.start < n:
            raise MalformedInput(f"arc start {self.start} out of range")
        if isinstance(self.host, ChainCurve) and self.start + self.length > n:
            raise MalformedInput("chain arcs cannot wrap around")

    @property
    def components(self) -> tuple[int, ...]:
        n = self.host.n_components
        if isinstance(self.host, CycleCurve):
            return tuple((self.start + i) % n for i in range(self.length))
        return tuple(range(self.start, self.start + self.length))

    @property
    def boundary_nodes(self) -> int:
        if isinstance(self.host, CycleCurve):
            return 2
        touches_end = self.start == 0 or self.start + self.length == self.host.length
        return 1 if touches_end else 2


@functools.lru_cache(maxsize=None)
def arc_supports(is_cycle: bool, n: int) -> tuple[tuple[int, ...], ...]:
    """Component sets of the proper arcs of E_n (or I_n), shortest first."""
    if is_cycle:
        return tuple(
            tuple((start + i) % n for i in range(length))
            for length in range(1, n)
            for start in range(n)
        )
    return tuple(
        tuple(range(start, start + length))
        for length in range(1, n)
        for start in range(n - length + 1)
    )


def proper_arcs(curve: Curve) -> list[Arc]:
    """Every connected proper subcurve, each exactly once.

    A cycle with N >= 2 components has N(N-1) of them, a chain of length k
    has k(k+1)/2 - 1.
    """
    n = curve.n_components
    if isinstance(curve, CycleCurve):
        return [Arc(curve, start, length) for length in range(1, n) for start in range(n)]
    return [
        Arc(curve, start, length)
        for length in range(1, n)
        for start in range(n - length + 1)
    ]


@dataclass(frozen=True)
class ChainMap:
    """The map I_k -> E_N sending chain component j to cycle component (start + j) mod N.

    Chains always wind in the increasing direction; the opposite winding is
    the image of this one under a curve automorphism.
    """

    length: int
    target: CycleCurve
    start: int = 0

    def __post_init__(self):
        if not isinstance(self.length, int) or self.length < 1:
            raise MalformedInput(f"chain length must be positive, got {self.length!r}")
        if not 0 <= self.start < self.target.n_components:
            raise MalformedInput(
                f"chain start {self.start} out of range for E_{self.target.n_components}"
            )

    @property
    def chain(self) -> ChainCurve:
        return ChainCurve(self.length)

    def image(self, j: int) -> int:
        return chain_image(self, j)

    def pulled_back_polarization(self) -> tuple[int, ...]:
        pol = self.target.polarization
        return tuple(pol[self.image(j)] for j in range(self.length))


def chain_image(chain_map: ChainMap, j: int) -> int:
    if not 0 <= j < chain_map.length:
        raise MalformedInput(f"chain component {j} out of range for I_{chain_map.length}")
    return (chain_map.start + j) % chain_map.target.n_components


@dataclass(frozen=True)
class SmoothPoint:
    component: int
    coordinate: Fraction

    def __post_init__(self):
        coord = Fraction(self.coordinate)
        if coord == 0:
            raise MalformedInput("coordinate 0 is a node, not a smooth point")
        object.__setattr__(self, "coordinate", coord)


@dataclass(frozen=True)
class Node:
    node: int


CurvePoint = Union[SmoothPoint, Node]
