"""Degree-zero moduli on a cycle E_N as symmetric products of the nodal cubic.

An S-equivalence class of semistable sheaves with multirank (r, ..., r)
and chi = 0 is a point of Sym^r E_1.  A stable line bundle of multidegree
zero and gluing lambda gives the smooth point lambda of E_1 (so E_1 minus
its node is identified with the multiplicative group); a complete block
O_{C_1}(-1) + ... + O_{C_N}(-1) of Jordan-Hölder factors gives the node.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .curves import CycleCurve
from .errors import DomainError, FMCyclesError, MalformedInput
from .sheaves import (
    MinusOneOnComponent,
    SheafDescriptor,
    StableLineBundle,
    graded_degree0,
    invariants_of,
    nlf,
    vb,
)


@dataclass(frozen=True, order=True)
class Smooth:
    lam: Fraction

    def __post_init__(self):
        lam = Fraction(self.lam)
        if lam == 0:
            raise MalformedInput("lambda must be nonzero")
        object.__setattr__(self, "lam", lam)

    def __str__(self):
        return str(self.lam)


@dataclass(frozen=True, order=True)
class NodePoint:
    def __str__(self):
        return "node"


E1Point = Union[Smooth, NodePoint]


def _key(p: E1Point):
    return (1, Fraction(0)) if isinstance(p, NodePoint) else (0, p.lam)


@dataclass(frozen=True)
class ModuliPointE1:
    """A point of Sym^r E_1, stored as a sorted tuple (nodes last)."""

    points: tuple[E1Point, ...]

    def __post_init__(self):
        pts = tuple(sorted(self.points, key=_key))
        if not pts:
            raise MalformedInput("a point of Sym^r E_1 needs r >= 1")
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def node_multiplicity(self) -> int:
        return sum(isinstance(p, NodePoint) for p in self.points)

    def __str__(self):
        counts = Counter(self.points)
        parts = []
        for p in sorted(counts, key=_key):
            parts.append(str(p) if counts[p] == 1 else f"{p}^{counts[p]}")
        return "{" + ", ".join(parts) + "}"


class InconsistentGraded(FMCyclesError, RuntimeError):
    """Jordan-Hölder factors that do not split into complete node blocks."""


def _require_cycle(curve: CycleCurve) -> None:
    if curve.n_components < 2:
        raise DomainError("the Sym^r E_1 description needs N >= 2")


def moduli_point(d: SheafDescriptor) -> ModuliPointE1:
    _require_cycle(d.host)
    kc, _ = invariants_of(d)
    if kc.chi != 0:
        raise DomainError(f"moduli points are defined at chi = 0, got chi = {kc.chi}")
    if not kc.is_balanced:
        raise DomainError(f"multirank {kc.multirank} is not balanced")
    factors = graded_degree0(d)
    smooth = [Smooth(f.gluing) for f in factors if isinstance(f, StableLineBundle)]
    per_component = Counter(f.component for f in factors if isinstance(f, MinusOneOnComponent))
    n = d.host.n_components
    blocks = {per_component[i] for i in range(n)}
    if len(blocks) != 1:
        raise InconsistentGraded(f"factors O_(C_i)(-1) with multiplicities {dict(per_component)} form no complete blocks")
    point = ModuliPointE1(tuple(smooth) + (NodePoint(),) * blocks.pop())
    if point.size != kc.multirank[0]:
        raise InconsistentGraded(f"point of size {point.size} for multirank {kc.multirank}")
    return point


def phi_bar(p: E1Point | ModuliPointE1, curve: CycleCurve) -> SheafDescriptor:
    """A representative of the S-class over ``p``."""
    _require_cycle(curve)
    n = curve.n_components
    if isinstance(p, ModuliPointE1):
        summands = []
        for q in p.points:
            summands.extend(phi_bar(q, curve).summands)
        return SheafDescriptor(curve, tuple(summands))
    if isinstance(p, Smooth):
        return SheafDescriptor.of(vb(curve, (0,) * n, p.lam))
    if isinstance(p, NodePoint):
        return SheafDescriptor(curve, tuple(nlf(curve, (-1,), start=i) for i in range(n)))
    raise MalformedInput(f"not a point of E_1: {p!r}")


@dataclass(frozen=True)
class KStarComponent:
    def __str__(self):
        return "component M((1,...,1),0): k* compactified by a node"


@dataclass(frozen=True)
class IsolatedPoints:
    components: tuple[int, ...]

    def __str__(self):
        names = ", ".join(f"O_C{i + 1}(-1)" for i in self.components)
        return f"isolated points {names}"


@dataclass(frozen=True)
class Empty:
    def __str__(self):
        return "empty"


StableLocusDescription = Union[KStarComponent, IsolatedPoints, Empty]


def stable_locus(r: int, curve: CycleCurve) -> StableLocusDescription:
    """Stable sheaves of polarized rank r and chi = 0.

    All components with h_i = r are reported, even when there are several.
    """
    _require_cycle(curve)
    if r < 1:
        raise MalformedInput(f"rank must be positive, got {r}")
    if r == curve.total_degree:
        return KStarComponent()
    hits = tuple(i for i, h in enumerate(curve.polarization) if h == r)
    return IsolatedPoints(hits) if hits else Empty()


def component_dimension(multirank: Sequence[int], curve: CycleCurve) -> int:
    """Dimension of the component of M(multirank, 0): the minimum of the r_i."""
    mr = tuple(multirank)
    if len(mr) != curve.n_components:
        raise MalformedInput(f"multirank has length {len(mr)}, expected {curve.n_components}")
    if any(r < 0 for r in mr):
        raise MalformedInput(f"ranks must be nonnegative: {mr}")
    return min(mr)
