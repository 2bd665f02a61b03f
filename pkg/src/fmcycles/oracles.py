"""Slow, independent reference computations used to cross-check the library."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from .errors import DomainError
from .invariants import HilbertClass
from .sheaves import NLF, VB, StabilityVerdict
from .transforms import PHI, PHI_HAT, apply_total


def _pieces(subset: Sequence[int], n: int, is_cycle: bool) -> int:
    """Number of connected components of a set of components of E_n or I_n."""
    chosen = set(subset)
    starts = sum(1 for i in chosen if ((i - 1) % n if is_cycle else i - 1) not in chosen)
    return max(starts, 1) if chosen else 0


def subcurve_verdict(md: Sequence[int], pol: Sequence[int], chi: int, is_cycle: bool) -> StabilityVerdict:
    """Compare the slope of L with that of L|_Z for every proper subcurve Z.

    Disconnected Z are included; L|_Z has Euler characteristic
    sum_Z d_i + (number of connected pieces of Z).
    """
    n = len(md)
    mu = Fraction(chi, sum(pol))
    strict = True
    for size in range(1, n):
        for subset in itertools.combinations(range(n), size):
            q = Fraction(sum(md[i] for i in subset) + _pieces(subset, n, is_cycle), sum(pol[i] for i in subset))
            if q < mu:
                return StabilityVerdict.UNSTABLE
            if q == mu:
                strict = False
    return StabilityVerdict.STABLE if strict else StabilityVerdict.STRICTLY_SEMISTABLE


def pushforward_invariants(x) -> tuple[tuple[int, ...], int, tuple[int, ...]]:
    """(multirank, chi, multidegree) by summing over the fibres of the map.

    For a cover, the components of E_{sN} over C_i are i, i + N, ...; each
    carries L (x) F_m of rank m and degree m d_j.  For a chain, chain
    component j lies over C_{(start + j) mod N}.
    """
    n = x.host.n_components
    if isinstance(x, VB):
        md = x.bundle.multidegree
        fibres = {i: [j for j in range(len(md)) if j % n == i] for i in range(n)}
        ranks = tuple(x.m * len(fibres[i]) for i in range(n))
        degs = tuple(sum(x.m * md[j] for j in fibres[i]) for i in range(n))
        # chi(L (x) F_m) = m chi(L) and chi(L) = deg L on a cycle
        return ranks, x.m * sum(md), degs
    if isinstance(x, NLF):
        md = x.bundle.multidegree
        over = [(x.map.start + j) % n for j in range(len(md))]
        ranks = tuple(over.count(i) for i in range(n))
        degs = tuple(sum(d for d, i in zip(md, over) if i == c) for c in range(n))
        return ranks, 1 + sum(md), degs
    raise TypeError(x)


def _normalize(hc: HilbertClass) -> tuple[int, int] | None:
    r, d = hc.r, hc.d
    if r < 0 or (r == 0 and d < 0):
        r, d = -r, -d
    if r == 0:
        return (0, d) if d > 0 else None
    return r, d % r


def bfs_orbit(r: int, d: int, h: int, cap: int) -> set[tuple[int, int]]:
    """Reachable states via explicit PHI / PHI_HAT applications to PSI-translates.

    From (r, d) every translate (r, d + k r) whose image under PHI or
    PHI_HAT has leading coefficient at most ``cap`` in absolute value is
    tried.  Classes are taken up to sign and PSI.
    """
    if r < 0 or (r == 0 and d <= 0):
        raise DomainError("invalid class")
    start = _normalize(HilbertClass(r, d))
    seen = {start}
    todo = [start]
    while todo:
        r0, d0 = todo.pop()
        if r0 == 0:
            continue
        # |(d0 + k r0) h -+ r0| <= cap bounds k
        kmax = (cap + r0) // (r0 * h) + abs(d0) + 2
        for k in range(-kmax, kmax + 1):
            src = HilbertClass(r0, d0 + k * r0)
            for t in (PHI, PHI_HAT):
                img = apply_total(t, src, h)
                if abs(img.r) > cap:
                    continue
                s = _normalize(img)
                if s is not None and s not in seen:
                    seen.add(s)
                    todo.append(s)
    return seen
