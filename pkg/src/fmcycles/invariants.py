"""Numerical invariants of sheaves on cycles and chains of projective lines.

Two levels are kept apart:

* :class:`HilbertClass` ``(r, d)`` -- the Hilbert polynomial ``r s + d`` with
  respect to a polarization; ``d`` is the Euler characteristic.
* :class:`KClass` ``(multirank, chi)`` -- the class in the Grothendieck group,
  which for a curve with N rational components is Z^{N+1}.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .curves import ChainCurve, CycleCurve, Curve
from .errors import DomainError, MalformedInput
from .linalg import rank


@dataclass(frozen=True, order=True)
class HilbertClass:
    r: int
    d: int

    def __add__(self, other: "HilbertClass") -> "HilbertClass":
        return HilbertClass(self.r + other.r, self.d + other.d)

    def __neg__(self) -> "HilbertClass":
        return HilbertClass(-self.r, -self.d)

    def __mul__(self, k: int) -> "HilbertClass":
        return HilbertClass(k * self.r, k * self.d)

    __rmul__ = __mul__

    @property
    def is_sheaf_class(self) -> bool:
        """Could this be the Hilbert polynomial of a nonzero sheaf?"""
        return self.r > 0 or (self.r == 0 and self.d > 0)

    @property
    def is_complex_class(self) -> bool:
        return not self.is_sheaf_class

    def __str__(self):
        return f"({self.r}, {self.d})"


@dataclass(frozen=True)
class KClass:
    multirank: tuple[int, ...]
    chi: int

    def __post_init__(self):
        object.__setattr__(self, "multirank", tuple(int(x) for x in self.multirank))

    def __add__(self, other: "KClass") -> "KClass":
        _check_len(self.multirank, len(other.multirank), "multirank")
        return KClass(
            tuple(a + b for a, b in zip(self.multirank, other.multirank)),
            self.chi + other.chi,
        )

    def __mul__(self, k: int) -> "KClass":
        return KClass(tuple(k * a for a in self.multirank), k * self.chi)

    __rmul__ = __mul__

    @property
    def is_balanced(self) -> bool:
        return len(set(self.multirank)) <= 1


def _check_len(seq: Sequence, n: int, what: str) -> None:
    if len(seq) != n:
        raise MalformedInput(f"{what} has length {len(seq)}, expected {n}")


@functools.total_ordering
@dataclass(frozen=True)
class Slope:
    """Simpson slope d/r; ``value is None`` encodes the infinite slope of torsion."""

    value: Fraction | None

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __lt__(self, other: "Slope") -> bool:
        if not isinstance(other, Slope):
            other = Slope(Fraction(other))
        if self.value is None:
            return False
        if other.value is None:
            return True
        return self.value < other.value

    def __eq__(self, other) -> bool:
        if isinstance(other, Slope):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value is not None and self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __str__(self):
        return "inf" if self.value is None else str(self.value)


INFINITE = Slope(None)


def slope(hc: HilbertClass) -> Slope:
    if not hc.is_sheaf_class:
        raise DomainError(f"{hc} is not the Hilbert class of a nonzero sheaf")
    if hc.r == 0:
        return INFINITE
    return Slope(Fraction(hc.d, hc.r))


def hilbert_of_kclass(kc: KClass, curve: CycleCurve | Sequence[int]) -> HilbertClass:
    """``r = sum r_i h_i`` and ``d = chi``."""
    pol = curve.polarization if isinstance(curve, CycleCurve) else tuple(curve)
    _check_len(kc.multirank, len(pol), "multirank")
    return HilbertClass(sum(r * h for r, h in zip(kc.multirank, pol)), kc.chi)


@dataclass(frozen=True)
class KGenerators:
    """Classes of O_X, of each O_{C_i} and of a point.

    The component sheaves together with the point class form a Z-basis;
    the structure sheaf is returned for convenience.
    """

    structure_sheaf: KClass
    components: tuple[KClass, ...]
    point: KClass

    def decompose(self, kc: KClass) -> tuple[tuple[int, ...], int]:
        """Coefficients of ``kc`` over (O_{C_1}, ..., O_{C_N}, O_x)."""
        _check_len(kc.multirank, len(self.components), "multirank")
        coeffs = kc.multirank
        return coeffs, kc.chi - sum(coeffs)

    def recompose(self, coeffs: Sequence[int], point_coeff: int) -> KClass:
        total = self.point * point_coeff
        for c, g in zip(coeffs, self.components):
            total = total + g * c
        return total


def kgroup_generators(curve: CycleCurve) -> KGenerators:
    n = curve.n_components
    unit = lambda i: tuple(1 if j == i else 0 for j in range(n))  # noqa: E731
    return KGenerators(
        structure_sheaf=KClass((1,) * n, 0),
        components=tuple(KClass(unit(i), 1) for i in range(n)),
        point=KClass((0,) * n, 1),
    )


def torsion_length(kc: KClass, multidegree: Sequence[int]) -> int:
    """Length of the cokernel of E -> (+)_i E_{C_i}: sum(d_i + r_i) - chi."""
    _check_len(multidegree, len(kc.multirank), "multidegree")
    return sum(d + r for d, r in zip(multidegree, kc.multirank)) - kc.chi


@dataclass(frozen=True)
class CycleLineBundle:
    """Line bundle on a cycle in gluing normal form.

    All node identifications are the identity except at the closing node
    N-1, where the section on the last component equals ``gluing`` times
    the section on component 0.
    """

    multidegree: tuple[int, ...]
    gluing: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "multidegree", tuple(int(x) for x in self.multidegree))
        g = Fraction(self.gluing)
        if g == 0:
            raise MalformedInput("gluing scalar must be nonzero")
        object.__setattr__(self, "gluing", g)

    @property
    def degree(self) -> int:
        return sum(self.multidegree)

    @property
    def euler_characteristic(self) -> int:
        return self.degree


@dataclass(frozen=True)
class ChainLineBundle:
    multidegree: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "multidegree", tuple(int(x) for x in self.multidegree))

    @property
    def degree(self) -> int:
        return sum(self.multidegree)

    @property
    def euler_characteristic(self) -> int:
        return self.degree + 1


LineBundle = Union[CycleLineBundle, ChainLineBundle]


def line_bundle_cohomology(bundle: LineBundle, curve: Curve | None = None) -> tuple[int, int]:
    """(h^0, h^1) of a line bundle on a cycle or chain.

    h^0 is the dimension of the space of tuples of binary forms of degree
    d_i, one per component, agreeing at every node (up to the gluing scalar
    at the closing node of a cycle).  h^1 is the cokernel of the evaluation
    map to the nodes plus the h^1 of the components.
    """
    degs = bundle.multidegree
    is_cycle = isinstance(bundle, CycleLineBundle)
    if curve is not None:
        if is_cycle != isinstance(curve, CycleCurve):
            raise MalformedInput("line bundle and curve are of different types")
        _check_len(degs, curve.n_components, "multidegree")
    if not degs:
        raise MalformedInput("empty multidegree")

    # coefficient of x0^d is the value at coordinate 0, of x1^d the value at infinity
    offsets, n_vars = [], 0
    for d in degs:
        offsets.append(n_vars if d >= 0 else None)
        n_vars += d + 1 if d >= 0 else 0

    def at_zero(i):
        return offsets[i]

    def at_infinity(i):
        return None if offsets[i] is None else offsets[i] + degs[i]

    n = len(degs)
    nodes = range(n) if is_cycle else range(n - 1)
    rows = []
    for j in nodes:
        k = (j + 1) % n
        g = bundle.gluing if (is_cycle and j == n - 1) else Fraction(1)
        row = [Fraction(0)] * n_vars
        if at_infinity(j) is not None:
            row[at_infinity(j)] += 1
        if at_zero(k) is not None:
            row[at_zero(k)] -= g
        rows.append(row)

    # 0 -> L -> (+)_i L|C_i -> (+)_nodes k -> 0; h^1(P^1, O(d)) = -d - 1 for d <= -2
    rk = rank(rows, n_vars) if n_vars else 0
    h0 = n_vars - rk
    h1 = len(rows) - rk + sum(-d - 1 for d in degs if d <= -2)
    return h0, h1
