"""Numerical action of the Fourier-Mukai equivalences on invariants.

``PHI`` has kernel the ideal sheaf of the diagonal, ``PHI_HAT`` the dual
ideal; ``PSI`` and ``PSI_HAT`` twist by O(H) and O(-H).  On Hilbert classes
with respect to a polarization of total degree h they act by

    PHI:     (r, d) -> (dh - r, -d)
    PHI_HAT: (r, d) -> (dh + r,  d)
    PSI:     (r, d) -> (r, d + r)
    PSI_HAT: (r, d) -> (r, d - r)

Outputs with negative entries are classes of shifted complexes and are
returned as-is.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DomainError, MalformedInput
from .invariants import HilbertClass, KClass, Slope


@dataclass(frozen=True)
class Basic:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Twist:
    """Tensor product with a line bundle of the given multidegree."""

    multidegree: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "multidegree", tuple(int(x) for x in self.multidegree))

    def __str__(self):
        return "twist:" + ",".join(str(x) for x in self.multidegree)


PHI = Basic("phi")
PHI_HAT = Basic("phihat")
PSI = Basic("psi")
PSI_HAT = Basic("psihat")

TransformSymbol = Union[Basic, Twist]

_BY_NAME = {t.name: t for t in (PHI, PHI_HAT, PSI, PSI_HAT)}


def apply_total(t: TransformSymbol, hc: HilbertClass, h: int) -> HilbertClass:
    if h < 1:
        raise MalformedInput(f"polarization degree must be positive, got {h}")
    r, d = hc.r, hc.d
    if t == PHI:
        return HilbertClass(d * h - r, -d)
    if t == PHI_HAT:
        return HilbertClass(d * h + r, d)
    if t == PSI:
        return HilbertClass(r, d + r)
    if t == PSI_HAT:
        return HilbertClass(r, d - r)
    if isinstance(t, Twist):
        raise DomainError("a twist by an arbitrary line bundle does not act on Hilbert classes; use apply_twist")
    raise MalformedInput(f"unknown transform {t!r}")


def compose_total(seq: Iterable[TransformSymbol], hc: HilbertClass, h: int) -> HilbertClass:
    """Apply ``seq`` left to right."""
    seq = list(seq)
    if any(isinstance(t, Twist) for t in seq):
        raise DomainError("twists act on K-classes only; total-level sequences cannot contain them")
    for t in seq:
        hc = apply_total(t, hc, h)
    return hc


def apply_twist(t: Twist, kc: KClass) -> KClass:
    """chi -> chi + sum r_i d_i; the multirank is unchanged."""
    if len(t.multidegree) != len(kc.multirank):
        raise MalformedInput(
            f"twist multidegree has length {len(t.multidegree)}, multirank {len(kc.multirank)}"
        )
    return KClass(kc.multirank, kc.chi + sum(r * d for r, d in zip(kc.multirank, t.multidegree)))


def apply_kclass(t: TransformSymbol, kc: KClass, polarization: Sequence[int]) -> KClass:
    """Action on K-classes where it is determined by the class alone.

    Twists (including PSI, PSI_HAT as twists by +-H) act on any class; PHI
    and PHI_HAT only on balanced multiranks.
    """
    if isinstance(t, Twist):
        return apply_twist(t, kc)
    if t == PSI:
        return apply_twist(Twist(polarization), kc)
    if t == PSI_HAT:
        return apply_twist(Twist(tuple(-x for x in polarization)), kc)
    if not kc.is_balanced:
        raise DomainError("PHI and PHI_HAT have no well-defined action on unbalanced multiranks")
    rbar = kc.multirank[0] if kc.multirank else 0
    n = len(polarization)
    if t == PHI:
        return KClass((kc.chi - rbar,) * n, -kc.chi)
    if t == PHI_HAT:
        return KClass((kc.chi + rbar,) * n, kc.chi)
    raise MalformedInput(f"unknown transform {t!r}")


def apply_balanced(t: Basic, rbar: int, d: int, h: int) -> tuple[int, int]:
    """Induced isomorphism on moduli of balanced multirank (rbar, ..., rbar).

    PHI sends (rbar, d) to (d - rbar, -d) when d > rbar and to (rbar - d, d)
    otherwise (the sheaf is then WIT_1 and the class changes sign); PSI
    sends it to (rbar, rbar*h + d).
    """
    if t == PHI:
        return (d - rbar, -d) if d > rbar else (rbar - d, d)
    if t == PSI:
        return rbar, rbar * h + d
    raise MalformedInput(f"apply_balanced supports phi and psi, not {t}")


def wit_index(t: Basic, s: Slope, h: int) -> int:
    """WIT index of a semistable sheaf of slope ``s``.

    PHI: index 0 exactly when the slope exceeds 1/h; PHI_HAT: when it
    exceeds -1/h.  Torsion sheaves (infinite slope) are always WIT_0.
    Twists are exact, so their index is always 0.
    """
    if t in (PSI, PSI_HAT) or isinstance(t, Twist):
        return 0
    if t == PHI:
        threshold = Fraction(1, h)
    elif t == PHI_HAT:
        threshold = Fraction(-1, h)
    else:
        raise MalformedInput(f"unknown transform {t!r}")
    return 0 if s > Slope(threshold) else 1


def parse_transforms(text: str) -> list[TransformSymbol]:
    """Parse 'phi,psi,twist:1,-1,psihat' style strings.

    A ``twist:`` token swallows the following integer tokens.
    """
    out: list[TransformSymbol] = []
    tokens = [tok.strip() for tok in text.split(",") if tok.strip()]
    i = 0
    while i < len(tokens):
        tok = tokens[i].lower()
        if tok.startswith("twist:"):
            degs = [tok[len("twist:"):]]
            i += 1
            while i < len(tokens) and _is_int(tokens[i]):
                degs.append(tokens[i])
                i += 1
            try:
                out.append(Twist(tuple(int(x) for x in degs)))
            except ValueError:
                raise MalformedInput(f"bad twist multidegree in {text!r}") from None
            continue
        if tok not in _BY_NAME:
            raise MalformedInput(f"unknown transform token {tokens[i]!r}")
        out.append(_BY_NAME[tok])
        i += 1
    return out


def _is_int(s: str) -> bool:
    try:
        int(s)
    except ValueError:
        return False
    return True


def format_transforms(seq: Iterable[TransformSymbol]) -> str:
    return ",".join(str(t) for t in seq)
