"""Indecomposable torsion-free sheaves on a cycle E_N and their stability.

Every indecomposable torsion-free sheaf is one of

* ``VB``: the pushforward along the étale cover E_{sN} -> E_N of L (x) F_m,
  with L a line bundle of non-periodic multidegree (when s > 1) and F_m the
  Atiyah bundle of rank m;
* ``NLF``: the pushforward of a line bundle along a chain map I_k -> E_N.

Stability is with respect to the Simpson slope chi/r, where r is the
polarized rank.  For rank one sheaves it is decided on quotients to proper
arcs: the quotient L|_Z of a line bundle to an arc Z has Euler
characteristic sum_Z d_i + 1.
"""

from __future__ import annotations

import enum
import functools
import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Union

from .curves import ChainMap, CycleCurve, Curve, Node, SmoothPoint
from .errors import DomainError, MalformedInput
from .invariants import ChainLineBundle, CycleLineBundle, HilbertClass, KClass, hilbert_of_kclass


@dataclass(frozen=True)
class VB:
    """pi_*(L (x) F_m) for the degree ``cover`` étale cover of ``host``."""

    host: CycleCurve
    cover: int
    m: int
    bundle: CycleLineBundle

    def __post_init__(self):
        if self.cover < 1 or self.m < 1:
            raise MalformedInput(f"cover degree and Atiyah index must be positive, got {self.cover}, {self.m}")
        n = self.host.n_components
        if len(self.bundle.multidegree) != self.cover * n:
            raise MalformedInput(
                f"bundle on E_{self.cover * n} needs {self.cover * n} degrees, got {len(self.bundle.multidegree)}"
            )
        if not is_nonperiodic(self.bundle.multidegree, self.cover, n):
            raise MalformedInput(f"multidegree {self.bundle.multidegree} is periodic; the pushforward decomposes")

    @property
    def kind(self) -> str:
        return "vb"


@dataclass(frozen=True)
class NLF:
    """p_*(L) for a chain map p: I_k -> host; never locally free."""

    map: ChainMap
    bundle: ChainLineBundle

    def __post_init__(self):
        if len(self.bundle.multidegree) != self.map.length:
            raise MalformedInput(
                f"bundle on I_{self.map.length} needs {self.map.length} degrees, got {len(self.bundle.multidegree)}"
            )

    @property
    def host(self) -> CycleCurve:
        return self.map.target

    @property
    def kind(self) -> str:
        return "nlf"


IndecomposableSheaf = Union[VB, NLF]


def vb(host: CycleCurve, multidegree: Sequence[int], gluing=1, cover: int = 1, m: int = 1) -> VB:
    return VB(host, cover, m, CycleLineBundle(tuple(multidegree), Fraction(gluing)))


def nlf(host: CycleCurve, multidegree: Sequence[int], start: int = 0) -> NLF:
    return NLF(ChainMap(len(multidegree), host, start), ChainLineBundle(tuple(multidegree)))


@dataclass(frozen=True)
class SheafDescriptor:
    """A finite direct sum of indecomposables over one host cycle."""

    host: CycleCurve
    summands: tuple[IndecomposableSheaf, ...]

    def __post_init__(self):
        summands = tuple(self.summands)
        if not summands:
            raise MalformedInput("a descriptor needs at least one summand")
        for x in summands:
            if x.host != self.host:
                raise MalformedInput("all summands must live on the descriptor's host curve")
        object.__setattr__(self, "summands", summands)

    @classmethod
    def of(cls, *summands: IndecomposableSheaf) -> "SheafDescriptor":
        if not summands:
            raise MalformedInput("a descriptor needs at least one summand")
        return cls(summands[0].host, summands)

    def __add__(self, other: "SheafDescriptor") -> "SheafDescriptor":
        return SheafDescriptor(self.host, self.summands + other.summands)


class StabilityVerdict(enum.Enum):
    STABLE = "stable"
    STRICTLY_SEMISTABLE = "strictly semistable"
    UNSTABLE = "unstable"

    @property
    def is_semistable(self) -> bool:
        return self is not StabilityVerdict.UNSTABLE

    def __str__(self):
        return self.value


@dataclass(frozen=True, order=True)
class MinusOneOnComponent:
    """The stable sheaf O_{C_i}(-1)."""

    component: int

    def __str__(self):
        return f"O_C{self.component + 1}(-1)"


@dataclass(frozen=True, order=True)
class StableLineBundle:
    """The line bundle of multidegree zero with gluing scalar ``gluing``."""

    gluing: Fraction

    def __post_init__(self):
        g = Fraction(self.gluing)
        if g == 0:
            raise MalformedInput("gluing scalar must be nonzero")
        object.__setattr__(self, "gluing", g)

    def __str__(self):
        return f"L({self.gluing})"


JHFactor = Union[StableLineBundle, MinusOneOnComponent]


def _factor_key(f: JHFactor):
    if isinstance(f, StableLineBundle):
        return (0, f.gluing)
    return (1, f.component)


# -- invariants ---------------------------------------------------------------


def invariants_of(x: IndecomposableSheaf | SheafDescriptor) -> tuple[KClass, tuple[int, ...]]:
    """(K-class, multidegree over the host)."""
    if isinstance(x, SheafDescriptor):
        n = x.host.n_components
        ranks, degs, chi = [0] * n, [0] * n, 0
        for y in x.summands:
            kc, md = invariants_of(y)
            ranks = [a + b for a, b in zip(ranks, kc.multirank)]
            degs = [a + b for a, b in zip(degs, md)]
            chi += kc.chi
        return KClass(tuple(ranks), chi), tuple(degs)
    n = x.host.n_components
    if isinstance(x, VB):
        d = x.bundle.multidegree
        degs = [0] * n
        for j, dj in enumerate(d):
            degs[j % n] += x.m * dj
        return KClass((x.cover * x.m,) * n, x.m * sum(d)), tuple(degs)
    if isinstance(x, NLF):
        ranks, degs = [0] * n, [0] * n
        for j, dj in enumerate(x.bundle.multidegree):
            i = x.map.image(j)
            ranks[i] += 1
            degs[i] += dj
        return KClass(tuple(ranks), 1 + sum(x.bundle.multidegree)), tuple(degs)
    raise MalformedInput(f"not a sheaf descriptor: {x!r}")


def hilbert_class(x: IndecomposableSheaf | SheafDescriptor) -> HilbertClass:
    kc, _ = invariants_of(x)
    return hilbert_of_kclass(kc, x.host)


def is_nonperiodic(md: Sequence[int], s: int, n: int) -> bool:
    """True iff no cyclic shift by tN, 0 < t < s, fixes ``md``."""
    md = tuple(md)
    if len(md) != s * n:
        raise MalformedInput(f"multidegree of length {len(md)} does not live on E_{s * n}")
    return all(md[t * n:] + md[:t * n] != md for t in range(1, s))


def locally_free_defect(d: SheafDescriptor) -> int:
    """sum_i d_i - chi; zero exactly for vector bundles, negative otherwise."""
    kc, md = invariants_of(d)
    return sum(md) - kc.chi


def is_locally_free(d: SheafDescriptor) -> bool:
    answer = all(isinstance(x, VB) for x in d.summands)
    assert answer == (locally_free_defect(d) == 0)
    return answer


def pullback_multidegree(md: Sequence[int], s: int) -> tuple[int, ...]:
    if s < 1:
        raise MalformedInput(f"cover degree must be positive, got {s}")
    return tuple(md) * s


# -- stability ----------------------------------------------------------------


def line_bundle_stability(
    bundle: CycleLineBundle | ChainLineBundle,
    curve: Curve,
    polarization: Sequence[int] | None = None,
) -> StabilityVerdict:
    """Arc test for a line bundle on a cycle or a chain.

    ``polarization`` defaults to the cycle's own; chains need it supplied.
    """
    md = bundle.multidegree
    is_cycle = isinstance(curve, CycleCurve)
    if isinstance(bundle, CycleLineBundle) != is_cycle:
        raise MalformedInput("line bundle and curve are of different types")
    if polarization is None:
        if not is_cycle:
            raise MalformedInput("a chain needs an explicit polarization")
        polarization = curve.polarization
    pol = tuple(polarization)
    n = curve.n_components
    if len(md) != n or len(pol) != n:
        raise MalformedInput(f"expected {n} degrees and {n} polarization entries, got {len(md)} and {len(pol)}")
    if min(pol) < 1:
        raise MalformedInput(f"polarization degrees must be positive: {pol}")
    chi, total_h = bundle.euler_characteristic, sum(pol)
    if n == 1:
        return StabilityVerdict.STABLE
    # single components first: they settle most unstable cases cheaply
    for d, h in zip(md, pol):
        if (d + 1) * total_h < chi * h:
            return StabilityVerdict.UNSTABLE
    # prefix sums over the curve (read twice around a cycle) give arc sums
    reps = 2 if is_cycle else 1
    dsum = list(itertools.accumulate(md * reps, initial=0))
    hsum = list(itertools.accumulate(pol * reps, initial=0))
    strict = True
    for length in range(1, n):
        for start in range(n if is_cycle else n - length + 1):
            # compare (sum_Z d + 1) / h_Z with chi / h without fractions
            lhs = (dsum[start + length] - dsum[start] + 1) * total_h
            rhs = chi * (hsum[start + length] - hsum[start])
            if lhs < rhs:
                return StabilityVerdict.UNSTABLE
            if lhs == rhs:
                strict = False
    return StabilityVerdict.STABLE if strict else StabilityVerdict.STRICTLY_SEMISTABLE


def with_host(x: IndecomposableSheaf, host: CycleCurve) -> IndecomposableSheaf:
    """The same classification data over ``host`` (typically a new polarization)."""
    if isinstance(x, VB):
        if host.n_components != x.host.n_components:
            return VB(host, x.cover, x.m, x.bundle)
        # periodicity depends on N only; skip revalidating it
        y = object.__new__(VB)
        for name, value in (("host", host), ("cover", x.cover), ("m", x.m), ("bundle", x.bundle)):
            object.__setattr__(y, name, value)
        return y
    return NLF(ChainMap(x.map.length, host, x.map.start), x.bundle)


@functools.lru_cache(maxsize=1024)
def _cover(host: CycleCurve, s: int) -> CycleCurve:
    return host.cover(s)


def _rank_one_verdict(x: IndecomposableSheaf) -> StabilityVerdict:
    """Verdict of the line bundle upstairs, on the cover or on the chain."""
    if isinstance(x, VB):
        return line_bundle_stability(x.bundle, _cover(x.host, x.cover))
    return line_bundle_stability(x.bundle, x.map.chain, x.map.pulled_back_polarization())


def euler_characteristic(x: IndecomposableSheaf) -> int:
    if isinstance(x, VB):
        return x.m * sum(x.bundle.multidegree)
    return 1 + sum(x.bundle.multidegree)


def _require_degree0(x: IndecomposableSheaf) -> None:
    chi = euler_characteristic(x)
    if chi != 0:
        raise DomainError(f"degree-zero stability needs chi = 0, got chi = {chi}")


def degree0_verdict(x: IndecomposableSheaf) -> StabilityVerdict:
    """Verdict for a chi = 0 indecomposable.

    Pushforward along a cover or a chain map and tensoring with F_m both
    preserve semistability, so the line bundle upstairs decides it.  F_m (x) L
    is never stable for m >= 2.
    """
    _require_degree0(x)
    verdict = _rank_one_verdict(x)
    if verdict is StabilityVerdict.STABLE and isinstance(x, VB) and x.m > 1:
        return StabilityVerdict.STRICTLY_SEMISTABLE
    return verdict


def degree0_semistable(x: IndecomposableSheaf) -> bool:
    return degree0_verdict(x).is_semistable


def degree0_stable(x: IndecomposableSheaf) -> bool:
    """Stability of a chi = 0 indecomposable on E_N, N >= 2."""
    if x.host.n_components < 2:
        raise DomainError("the degree-zero classification of stable sheaves needs N >= 2")
    return degree0_verdict(x) is StabilityVerdict.STABLE


def stability(x: IndecomposableSheaf) -> StabilityVerdict:
    """Verdict for an indecomposable.

    At chi = 0 every shape is handled; otherwise only line bundles on the
    host and chain pushforwards, where the line bundle upstairs decides.
    """
    if euler_characteristic(x) == 0 and x.host.n_components >= 2:
        return degree0_verdict(x)
    if isinstance(x, VB) and (x.cover > 1 or x.m > 1):
        raise DomainError("stability of higher-rank bundles with chi != 0 is not supported")
    return _rank_one_verdict(x)


def descriptor_stability(d: SheafDescriptor) -> StabilityVerdict:
    """Verdict for a direct sum.

    A sum of two or more nonzero sheaves is never stable; it is semistable
    iff every summand is semistable of the common slope.
    """
    if len(d.summands) == 1:
        return stability(d.summands[0])
    target = hilbert_class(d)
    for x in d.summands:
        hc = hilbert_class(x)
        # a summand of larger slope destabilizes, one of smaller slope has a
        # complement of larger slope
        if hc.d * target.r != target.d * hc.r:
            return StabilityVerdict.UNSTABLE
    if all(stability(x).is_semistable for x in d.summands):
        return StabilityVerdict.STRICTLY_SEMISTABLE
    return StabilityVerdict.UNSTABLE


# -- Jordan-Hölder ------------------------------------------------------------


def _graded_summand(x: IndecomposableSheaf) -> list[JHFactor]:
    if not degree0_semistable(x):
        raise DomainError("an unstable summand has no Jordan-Hölder factors of slope 0")
    n = x.host.n_components
    if isinstance(x, VB):
        if x.cover == 1 and not any(x.bundle.multidegree):
            return [StableLineBundle(x.bundle.gluing)] * x.m
        return [MinusOneOnComponent(i) for i in range(n) for _ in range(x.cover * x.m)]
    return [MinusOneOnComponent(x.map.image(j)) for j in range(x.map.length)]


def graded_degree0(d: SheafDescriptor) -> tuple[JHFactor, ...]:
    """The Jordan-Hölder factors of a semistable chi = 0 sum, as a sorted multiset."""
    factors = []
    for x in d.summands:
        _require_degree0(x)
        factors.extend(_graded_summand(x))
    return tuple(sorted(factors, key=_factor_key))


def factor_sheaf(f: JHFactor, host: CycleCurve) -> IndecomposableSheaf:
    """The factor as an indecomposable on ``host``."""
    if isinstance(f, StableLineBundle):
        return vb(host, (0,) * host.n_components, f.gluing)
    return nlf(host, (-1,), start=f.component)


def factor_counts(factors: Sequence[JHFactor]) -> Counter:
    return Counter(factors)


def format_factors(factors: Sequence[JHFactor]) -> str:
    counts = Counter(factors)
    parts = []
    for f in sorted(counts, key=_factor_key):
        parts.append(str(f) if counts[f] == 1 else f"{f}^{counts[f]}")
    return " + ".join(parts)


# -- maximal ideals -------------------------------------------------------------


def maximal_ideal_sheaf(curve: CycleCurve, x: SmoothPoint | Node) -> SheafDescriptor:
    """The ideal sheaf of a point.

    At a smooth point with coordinate c on C_i it is the line bundle of
    multidegree -e_i with gluing c.  At node j it is the pushforward from
    the chain obtained by cutting the cycle open at j, with degree -1 on
    both ends of the chain.
    """
    n = curve.n_components
    if isinstance(x, SmoothPoint):
        if not 0 <= x.component < n:
            raise MalformedInput(f"component {x.component} out of range for E_{n}")
        md = tuple(-1 if i == x.component else 0 for i in range(n))
        return SheafDescriptor.of(vb(curve, md, x.coordinate))
    if isinstance(x, Node):
        if not 0 <= x.node < n:
            raise MalformedInput(f"node {x.node} out of range for E_{n}")
        md = (-2,) if n == 1 else (-1,) + (0,) * (n - 2) + (-1,)
        return SheafDescriptor.of(nlf(curve, md, start=(x.node + 1) % n))
    raise MalformedInput(f"not a curve point: {x!r}")


# -- enumeration ----------------------------------------------------------------


def enumerate_indecomposables(
    host: CycleCurve,
    max_cover: int = 2,
    max_m: int = 2,
    max_length: int | None = None,
    max_abs_degree: int = 2,
    chi: int | None = None,
) -> Iterator[IndecomposableSheaf]:
    """All indecomposables with bounded classification data.

    Vector bundles carry gluing 1 (the gluing never enters a verdict) and
    chains start anywhere on the host.  ``chi`` filters by Euler
    characteristic.
    """
    n = host.n_components
    max_length = n if max_length is None else max_length
    degrees = range(-max_abs_degree, max_abs_degree + 1)
    for s in range(1, max_cover + 1):
        for md in itertools.product(degrees, repeat=s * n):
            ms = [m for m in range(1, max_m + 1) if chi is None or m * sum(md) == chi]
            if ms and (s == 1 or is_nonperiodic(md, s, n)):
                for m in ms:
                    yield vb(host, md, 1, cover=s, m=m)
    for k in range(1, max_length + 1):
        for md in itertools.product(degrees, repeat=k):
            if chi is not None and 1 + sum(md) != chi:
                continue
            for start in range(n):
                yield nlf(host, md, start)
