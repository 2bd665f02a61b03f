"""Orbit reduction of moduli invariants (r, d) under PHI, PHI_HAT and PSI.

For a semistable sheaf of Hilbert class (r, d) and a polarization of
degree h, PHI identifies M(r, d) with M(dh - r, -d) when d/r > 1/h and
with M(r - dh, d) otherwise; PHI_HAT identifies it with M(dh + r, d) when
d/r > -1/h and with M(-dh - r, -d) otherwise; PSI identifies M(r, d) with
M(r, d + r).

States keep d reduced modulo r, so each PSI orbit is a single state.
Composing PSI^k with PHI, the leading coefficients reachable in one step
are |v| for every v = dh - r (mod rh); with PHI_HAT, |w| for every
w = dh + r (mod rh).  The two residues agree when h <= 2.

On column vectors the moves generate the subgroup of SL_2(Z) spanned by
[[1, h], [0, 1]], [[1, 0], [1, 1]] and -1, so gcd(r, d) is an orbit
invariant and r is invariant modulo h up to sign.  In particular the only
torsion state an orbit can contain is (0, gcd(r, d)).

The search is breadth-first and bounded by ``cap`` on the leading
coefficient.  No effective bound is known that guarantees the true minimum
is found below a given cap, hence the ``capped`` flag on the result.
"""

from __future__ import annotations

import threading
from collections import OrderedDict, deque
from dataclasses import dataclass
from math import gcd

from .errors import DomainError
from .invariants import HilbertClass
from .transforms import PHI, PHI_HAT, PSI, PSI_HAT, Basic, compose_total


@dataclass(frozen=True, order=True)
class OrbitState:
    r: int
    d: int

    def __post_init__(self):
        if self.r < 0:
            raise DomainError(f"orbit state needs r >= 0, got {self.r}")
        if self.r > 0 and not 0 <= self.d < self.r:
            raise DomainError(f"orbit state ({self.r}, {self.d}) is not reduced mod r")
        if self.r == 0 and self.d <= 0:
            raise DomainError(f"torsion state needs d > 0, got {self.d}")

    @property
    def is_torsion(self) -> bool:
        return self.r == 0

    def as_class(self) -> HilbertClass:
        return HilbertClass(self.r, self.d)

    def __str__(self):
        return f"({self.r}, {self.d})"


@dataclass(frozen=True)
class ReductionResult:
    source: HilbertClass
    terminal: OrbitState
    trace: tuple[Basic, ...]
    visited: int
    capped: bool
    h: int
    cap: int

    def replay(self) -> HilbertClass:
        """The class obtained by applying the trace to the source (= +-terminal)."""
        return compose_total(self.trace, self.source, self.h)


def _psi_power(k: int) -> tuple[Basic, ...]:
    return (PSI,) * k if k >= 0 else (PSI_HAT,) * (-k)


def normalize(hc: HilbertClass) -> tuple[OrbitState, tuple[Basic, ...]]:
    """Reduce d modulo r with PSI powers; torsion classes pass through."""
    if hc.r < 0 or (hc.r == 0 and hc.d <= 0):
        raise DomainError(f"{hc} is not the Hilbert class of a semistable sheaf (empty moduli space)")
    if hc.r == 0:
        return OrbitState(0, hc.d), ()
    q, d = divmod(hc.d, hc.r)
    return OrbitState(hc.r, d), _psi_power(-q)


def default_cap(hc: HilbertClass, h: int) -> int:
    return hc.r * h + abs(hc.d) * h + h


# A move is (target, pre-twist k, transform, post-twist j): PSI^k, then
# the transform, then PSI^j lands on +-target.
_Move = tuple[tuple[int, int], int, Basic, int]


def _residue_values(m: int, period: int, cap: int) -> list[int]:
    values = []
    v = m
    while v <= cap:
        values.append(v)
        v += period
    v = m - period
    while -v <= cap:
        values.append(v)
        v -= period
    return values


def _phi_moves(r: int, d: int, h: int, cap: int) -> list[_Move]:
    out = []
    for v in _residue_values((d * h - r) % (r * h), r * h, cap):
        dd = (v + r) // h  # exact: v + r = (d + kr) h
        k = (dd - d) // r
        if v == 0:
            out.append(((0, dd), k, PHI, 0))
        elif v > 0:
            q, nd = divmod(-dd, v)
            out.append(((v, nd), k, PHI, -q))
        else:
            q, nd = divmod(dd, -v)
            out.append(((-v, nd), k, PHI, -q))
    return out


def _phihat_moves(r: int, d: int, h: int, cap: int) -> list[_Move]:
    out = []
    for w in _residue_values((d * h + r) % (r * h), r * h, cap):
        dd = (w - r) // h
        k = (dd - d) // r
        if w == 0:
            if -dd > 0:
                out.append(((0, -dd), k, PHI_HAT, 0))
        elif w > 0:
            q, nd = divmod(dd, w)
            out.append(((w, nd), k, PHI_HAT, -q))
        else:
            q, nd = divmod(-dd, -w)
            out.append(((-w, nd), k, PHI_HAT, -q))
    return out


def _moves(r: int, d: int, h: int, cap: int, inverse: bool = True) -> list[_Move]:
    if r == 0:
        return []
    moves = _phi_moves(r, d, h, cap)
    if inverse:
        moves += _phihat_moves(r, d, h, cap)
    return moves


def _move_symbols(move: _Move) -> tuple[Basic, ...]:
    _, k, t, j = move
    return _psi_power(k) + (t,) + _psi_power(j)


def phi_successors(s: OrbitState, h: int, cap: int) -> set[OrbitState]:
    """One-step targets of PSI^k followed by PHI only, with |v| <= cap."""
    if s.r == 0:
        raise DomainError("torsion states have no successors")
    return {OrbitState(*m[0]) for m in _phi_moves(s.r, s.d, h, cap)}


def successors(s: OrbitState, h: int, cap: int) -> set[OrbitState]:
    """One-step targets of PSI^k followed by PHI or PHI_HAT, with leading coefficient <= cap."""
    if s.r == 0:
        raise DomainError("torsion states have no successors")
    return {OrbitState(*m[0]) for m in _moves(s.r, s.d, h, cap)}


def lower_bound(hc: HilbertClass, h: int) -> tuple[int, int]:
    """Smallest (r, d) compatible with the orbit invariants of ``hc``.

    r' must be a multiple g*x of g = gcd(r, d) with x = +-(r/g) mod h, and
    d' must satisfy gcd(r', d') = g.
    """
    g = gcd(hc.r, hc.d)
    x = (hc.r // g) % h
    x = min(x, (-x) % h)
    if x == 0:
        return 0, g
    rmin = g * x
    dmin = next(dd for dd in range(rmin) if gcd(rmin, dd) == g)
    return rmin, dmin


def _search(hc: HilbertClass, h: int, cap: int, *, stop_at=None, inverse: bool = True):
    if h < 1:
        raise DomainError(f"polarization degree must be positive, got {h}")
    if cap < 1:
        raise DomainError(f"cap must be positive, got {cap}")
    start, start_trace = normalize(hc)
    s0 = (start.r, start.d)
    parent: dict[tuple[int, int], tuple] = {s0: (None, None)}
    if s0 == stop_at:
        return start, start_trace, parent, False, s0
    queue = deque([s0])
    pruned = False
    while queue:
        r, d = s = queue.popleft()
        if r > 0:
            pruned = True  # every residue class of leading coefficients is unbounded
        for mv in _moves(r, d, h, cap, inverse):
            t = mv[0]
            if t not in parent:
                parent[t] = (s, mv)
                if t == stop_at:
                    return start, start_trace, parent, pruned, t
                queue.append(t)
    return start, start_trace, parent, pruned, None


def _trace_to(parent, start_trace, state) -> tuple[Basic, ...]:
    chunks = []
    while True:
        prev, mv = parent[state]
        if prev is None:
            break
        chunks.append(_move_symbols(mv))
        state = prev
    return start_trace + tuple(sym for chunk in reversed(chunks) for sym in chunk)


def reduce(hc: HilbertClass, h: int, cap: int | None = None) -> ReductionResult:
    """Lexicographically smallest (r, d) reachable from ``hc`` below ``cap``.

    The search stops early once it meets the invariant lower bound, which is
    then provably the minimum.
    """
    if h < 1:
        raise DomainError(f"total degree must be positive, got {h}")
    cap = default_cap(hc, h) if cap is None else cap
    bound = lower_bound(hc, h) if hc.r >= 0 and (hc.r > 0 or hc.d > 0) else None
    start, start_trace, parent, pruned, hit = _search(hc, h, cap, stop_at=bound)
    terminal = hit if hit is not None else min(parent)
    certified = terminal == bound
    return ReductionResult(
        source=hc,
        terminal=OrbitState(*terminal),
        trace=_trace_to(parent, start_trace, terminal),
        visited=len(parent),
        capped=pruned and not certified,
        h=h,
        cap=cap,
    )


def _targets(r: int, d: int, h: int, cap: int):
    """Targets of _moves without the bookkeeping; the hot loop of orbit()."""
    period = r * h
    m = (d * h - r) % period
    v = m - ((m + cap) // period) * period
    while v <= cap:
        dd = (v + r) // h
        if v > 0:
            yield v, -dd % v
        elif v < 0:
            yield -v, dd % -v
        else:
            yield 0, dd
        v += period
    m = (d * h + r) % period
    w = m - ((m + cap) // period) * period
    while w <= cap:
        dd = (w - r) // h
        if w > 0:
            yield w, dd % w
        elif w < 0:
            yield -w, -dd % -w
        elif dd < 0:
            yield 0, -dd
        w += period


def _closure(s0: tuple[int, int], h: int, cap: int) -> frozenset:
    seen = {s0}
    stack = [s0]
    while stack:
        r, d = stack.pop()
        if r == 0:
            continue
        for t in _targets(r, d, h, cap):
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(seen)


# Every move between nonzero-rank states below the cap has its inverse below
# the cap as well, so all such states of one orbit reach the same set.
# Recently computed orbits are kept and shared between their members.
_ORBIT_CACHE: OrderedDict = OrderedDict()
_ORBIT_CACHE_SIZE = 64
_ORBIT_LOCK = threading.Lock()


def _cached_closure(s0: tuple[int, int], h: int, cap: int) -> frozenset:
    if s0[0] == 0:
        return frozenset([s0])
    with _ORBIT_LOCK:
        for key, states in _ORBIT_CACHE.items():
            if key[:2] == (h, cap) and s0 in states:
                _ORBIT_CACHE.move_to_end(key)
                return states
    states = _closure(s0, h, cap)
    with _ORBIT_LOCK:
        _ORBIT_CACHE[(h, cap, s0)] = states
        while len(_ORBIT_CACHE) > _ORBIT_CACHE_SIZE:
            _ORBIT_CACHE.popitem(last=False)
    return states


def orbit(hc: HilbertClass, h: int, cap: int) -> list[OrbitState]:
    """Every state reachable from ``hc`` below ``cap``, in increasing order."""
    if h < 1:
        raise DomainError(f"polarization degree must be positive, got {h}")
    if cap < 1:
        raise DomainError(f"cap must be positive, got {cap}")
    start, _ = normalize(hc)
    return [OrbitState(*s) for s in sorted(_cached_closure((start.r, start.d), h, cap))]


def orbit_edges(hc: HilbertClass, h: int, cap: int):
    """Reachable states and every move between them, as (source, target, symbols)."""
    states = orbit(hc, h, cap)
    edges = []
    for s in states:
        for mv in _moves(s.r, s.d, h, cap):
            edges.append((s, OrbitState(*mv[0]), _move_symbols(mv)))
    return states, edges


def orbit_dot(hc: HilbertClass, h: int, cap: int) -> str:
    """The move graph in Graphviz DOT format; the start is boxed, the minimum bold."""
    states, edges = orbit_edges(hc, h, cap)
    start, _ = normalize(hc)
    lines = ["digraph orbit {", f'  label="orbit of {hc}, h={h}, cap={cap}";']
    for s in states:
        attrs = []
        if s == start:
            attrs.append("shape=box")
        if s == states[0]:
            attrs.append("style=bold")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f'  "{s.r},{s.d}"{suffix};')
    seen = set()
    for a, b, symbols in edges:
        if (a, b) in seen:
            continue
        seen.add((a, b))
        lines.append(f'  "{a.r},{a.d}" -> "{b.r},{b.d}" [label="{compress_trace(symbols)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def is_terminal_form(s: OrbitState, h: int) -> bool:
    """Membership in the trichotomy of minimal forms.

    Necessary for minimality, not sufficient: (3, 2) with h = 3 passes but
    reduces further to (0, 1).
    """
    if s.r == 0:
        return s.d > 0
    if s.d == 0:
        return h != 1
    return 0 < s.d < s.r and 2 * s.r <= s.d * h


def compress_trace(symbols) -> str:
    """Render runs such as psi,psi,psi as psi^3."""
    out: list[list] = []
    for sym in symbols:
        if out and out[-1][0] == sym:
            out[-1][1] += 1
        else:
            out.append([sym, 1])
    return ",".join(str(s) if n == 1 else f"{s}^{n}" for s, n in out)
