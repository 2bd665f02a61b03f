"""Acceptance suite: eleven exact or property-based checks, one line each.

Run with ``fmcycles selftest`` or ``python -m fmcycles.acceptance``.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable

from .curves import CycleCurve, Node, SmoothPoint
from .invariants import ChainLineBundle, CycleLineBundle, HilbertClass, line_bundle_cohomology
from .moduli import ModuliPointE1, NodePoint, Smooth, moduli_point, phi_bar
from .oracles import subcurve_verdict
from .reduction import is_terminal_form, orbit, reduce
from .sheaves import (
    NLF,
    VB,
    SheafDescriptor,
    StabilityVerdict,
    degree0_semistable,
    degree0_stable,
    degree0_verdict,
    descriptor_stability,
    enumerate_indecomposables,
    graded_degree0,
    invariants_of,
    is_locally_free,
    line_bundle_stability,
    locally_free_defect,
    maximal_ideal_sheaf,
    with_host,
)
from .transforms import PHI, PHI_HAT, PSI, PSI_HAT, compose_total

SEED = 20240613


@dataclass
class Outcome:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    limit: float | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" (limit {self.limit:g}s)" if self.limit else ""
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} [{self.seconds:.2f}s{budget}]"


# cached between criteria that share an enumeration
_ENUM: dict = {}


def _degree0_enumeration(n: int) -> list:
    if n not in _ENUM:
        _ENUM[n] = list(
            enumerate_indecomposables(CycleCurve(n), max_cover=2, max_m=2, max_length=n, max_abs_degree=2, chi=0)
        )
    return _ENUM[n]


def check_involutions() -> tuple[bool, str]:
    rng = random.Random(SEED)
    bad = 0
    for _ in range(2000):
        hc = HilbertClass(rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6))
        h = rng.randint(1, 6)
        if compose_total([PHI, PHI_HAT], hc, h) != -hc or compose_total([PHI_HAT, PHI], hc, h) != -hc:
            bad += 1
        if compose_total([PSI_HAT, PSI], hc, h) != hc or compose_total([PSI, PSI_HAT], hc, h) != hc:
            bad += 1
    return bad == 0, f"2000 classes, {bad} violations"


def check_gcd_law() -> tuple[bool, str]:
    bad = []
    for r in range(1, 51):
        for d in range(-50, 51):
            res = reduce(HilbertClass(r, d), 1)
            if (res.terminal.r, res.terminal.d) != (0, gcd(r, d)):
                bad.append((r, d))
    return not bad, f"{50 * 101} classes, mismatches {bad[:3]}"


def _reduction_table() -> dict:
    if "reduction" not in _ENUM:
        table = {}
        for h in (1, 2, 3, 4):
            for r in range(1, 21):
                for d in range(r):
                    table[h, r, d] = reduce(HilbertClass(r, d), h, 200)
        _ENUM["reduction"] = table
    return _ENUM["reduction"]


def check_reduction_oracle() -> tuple[bool, str]:
    table = _reduction_table()
    mismatch, not_form, bad_trace = [], [], []
    for (h, r, d), res in table.items():
        lowest = orbit(HilbertClass(r, d), h, 200)[0]
        if res.terminal != lowest:
            mismatch.append((h, r, d))
        if not is_terminal_form(res.terminal, h):
            not_form.append((h, r, d))
        end = res.replay()
        if end not in (res.terminal.as_class(), -res.terminal.as_class()):
            bad_trace.append((h, r, d))
    ok = not (mismatch or not_form or bad_trace)
    return ok, (
        f"{len(table)} classes; lex-min mismatches {len(mismatch)}, "
        f"outside trichotomy {len(not_form)}, bad traces {len(bad_trace)}"
    )


def check_e2_specialization() -> tuple[bool, str]:
    table = _reduction_table()
    bad = [k for k, res in table.items() if k[0] == 2 and res.terminal.d != 0 and res.terminal.r != 0]
    return not bad, f"{sum(1 for k in table if k[0] == 2)} terminals at h=2, {len(bad)} with r, d both nonzero"


def check_line_bundle_verdicts() -> tuple[bool, str]:
    e2 = CycleCurve(2, (1, 1))
    expected = {
        (0, 0): StabilityVerdict.STABLE,
        (2, -2): StabilityVerdict.UNSTABLE,
        (1, -1): StabilityVerdict.STRICTLY_SEMISTABLE,
    }
    wrong = [md for md, v in expected.items() if line_bundle_stability(CycleLineBundle(md), e2) is not v]
    disagree = []
    for md in itertools.product(range(-4, 5), repeat=2):
        got = line_bundle_stability(CycleLineBundle(md), e2)
        if got is not subcurve_verdict(md, e2.polarization, sum(md), True):
            disagree.append(md)
    return not (wrong or disagree), f"named verdicts wrong {wrong}; arc vs subcurve disagreements {len(disagree)}/81"


def _expected_stable(x) -> bool:
    if isinstance(x, NLF):
        return x.map.length == 1 and x.bundle.multidegree == (-1,)
    return x.cover == 1 and x.m == 1 and not any(x.bundle.multidegree)


def check_stable_classification() -> tuple[bool, str]:
    total, stable, wrong = 0, 0, []
    for n in (2, 3, 4):
        for x in _degree0_enumeration(n):
            total += 1
            got = degree0_stable(x)
            stable += got
            if got != _expected_stable(x):
                wrong.append(x)
    return not wrong, f"{total} indecomposables, {stable} stable, {len(wrong)} misclassified"


def check_locally_free() -> tuple[bool, str]:
    bad, count = 0, 0
    for n in (2, 3, 4):
        for x in _degree0_enumeration(n):
            count += 1
            d = SheafDescriptor.of(x)
            defect = locally_free_defect(d)
            if defect > 0 or (defect == 0) != isinstance(x, VB) or is_locally_free(d) != isinstance(x, VB):
                bad += 1
    # two-summand sums on E_2 with small degrees
    pool = list(enumerate_indecomposables(CycleCurve(2), max_abs_degree=1))
    for x, y in itertools.combinations_with_replacement(pool, 2):
        count += 1
        d = SheafDescriptor.of(x, y)
        defect = locally_free_defect(d)
        both_vb = isinstance(x, VB) and isinstance(y, VB)
        additive = defect == locally_free_defect(SheafDescriptor.of(x)) + locally_free_defect(SheafDescriptor.of(y))
        if defect > 0 or (defect == 0) != both_vb or not additive or is_locally_free(d) != both_vb:
            bad += 1
    return bad == 0, f"{count} descriptors, {bad} violations"


def _random_lambda(rng: random.Random) -> Fraction:
    return Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 5))


def check_cohomology() -> tuple[bool, str]:
    bad = []
    for n in range(1, 6):
        if line_bundle_cohomology(CycleLineBundle((0,) * n, Fraction(1))) != (1, 1):
            bad.append(("trivial", n))
    for lam in (Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 3), Fraction(-7, 5)):
        if line_bundle_cohomology(CycleLineBundle((2, -2), lam)) != (1, 1):
            bad.append(("(2,-2)", lam))
    rng = random.Random(SEED)
    for _ in range(500):
        n = rng.randint(1, 6)
        md = tuple(rng.randint(-4, 4) for _ in range(n))
        h0, h1 = line_bundle_cohomology(CycleLineBundle(md, _random_lambda(rng)))
        if h0 - h1 != sum(md) or min(h0, h1) < 0:
            bad.append(("cycle", md))
        h0, h1 = line_bundle_cohomology(ChainLineBundle(md))
        if h0 - h1 != sum(md) + 1 or min(h0, h1) < 0:
            bad.append(("chain", md))
    return not bad, f"test vectors and 1000 random bundles, failures {bad[:3]}"


LAMBDAS = (Fraction(1), Fraction(2), Fraction(3, 2), Fraction(-5))


def check_moduli_roundtrip() -> tuple[bool, str]:
    entries = [Smooth(lam) for lam in LAMBDAS] + [NodePoint()]
    bad, count = 0, 0
    for curve in (CycleCurve(2), CycleCurve(3), CycleCurve(3, (1, 2, 1))):
        for size in range(1, 5):
            for combo in itertools.combinations_with_replacement(entries, size):
                count += 1
                p = ModuliPointE1(combo)
                if moduli_point(phi_bar(p, curve)) != p:
                    bad += 1
        # semistable balanced sums of degree 0 come back with the same graded object
        for x in enumerate_indecomposables(curve, max_cover=2, max_m=2, max_abs_degree=1, chi=0):
            if not degree0_semistable(x) or not invariants_of(x)[0].is_balanced:
                continue
            count += 1
            d = SheafDescriptor.of(x)
            if graded_degree0(phi_bar(moduli_point(d), curve)) != graded_degree0(d):
                bad += 1
    return bad == 0, f"{count} points and descriptors, {bad} failures"


SAMPLE_COORDINATES = (Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 3), Fraction(-5, 2))


def check_maximal_ideals() -> tuple[bool, str]:
    bad, count = [], 0
    for n in range(1, 5):
        for pol in itertools.product((1, 2), repeat=n):
            curve = CycleCurve(n, pol)
            points = [Node(j) for j in range(n)]
            points += [SmoothPoint(i, c) for i in range(n) for c in SAMPLE_COORDINATES]
            for x in points:
                count += 1
                d = maximal_ideal_sheaf(curve, x)
                if descriptor_stability(d) is not StabilityVerdict.STABLE or invariants_of(d)[0].chi != -1:
                    bad.append((pol, x))
    return not bad, f"{count} ideals, {len(bad)} not stable of chi -1"


def check_polarization_independence() -> tuple[bool, str]:
    changed, count = 0, 0
    # degree-zero line bundles on E_2 from the verdict check
    family = [md for md in itertools.product(range(-4, 5), repeat=2) if sum(md) == 0]
    for md in family:
        base = line_bundle_stability(CycleLineBundle(md), CycleCurve(2))
        for pol in itertools.product((1, 2, 3), repeat=2):
            count += 1
            changed += line_bundle_stability(CycleLineBundle(md), CycleCurve(2, pol)) is not base
    # the stable-classification enumeration
    for n in (2, 3, 4):
        xs = _degree0_enumeration(n)
        base = [degree0_verdict(x) for x in xs]
        for pol in itertools.product((1, 2, 3), repeat=n):
            host = CycleCurve(n, pol)
            for x, v in zip(xs, base):
                count += 1
                changed += degree0_verdict(with_host(x, host)) is not v
    return changed == 0, f"{count} (sheaf, polarization) pairs, {changed} verdict changes"


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]], float | None]] = [
    (1, "FM involutions", check_involutions, 1.0),
    (2, "gcd law at h=1", check_gcd_law, 5.0),
    (3, "reduction vs orbit oracle", check_reduction_oracle, 30.0),
    (4, "E_2 specialization", check_e2_specialization, None),
    (5, "line-bundle verdicts on E_2", check_line_bundle_verdicts, 1.0),
    (6, "stable classification", check_stable_classification, 10.0),
    (7, "locally-free criterion", check_locally_free, None),
    (8, "cohomology vectors", check_cohomology, 2.0),
    (9, "moduli roundtrip", check_moduli_roundtrip, None),
    (10, "maximal ideals are stable", check_maximal_ideals, None),
    (11, "polarization independence at degree 0", check_polarization_independence, None),
]


def run_criterion(number: int) -> Outcome:
    for num, name, fn, limit in CRITERIA:
        if num == number:
            start = time.perf_counter()
            try:
                passed, detail = fn()
            except Exception as exc:  # a crash is a failure, reported on its line
                passed, detail = False, f"raised {type(exc).__name__}: {exc}"
            seconds = time.perf_counter() - start
            if limit is not None and seconds > limit:
                passed, detail = False, detail + "; over time budget"
            return Outcome(num, name, passed, detail, seconds, limit)
    raise KeyError(number)


def run_all(out=sys.stdout, only=None) -> list[Outcome]:
    outcomes = []
    for num, *_ in CRITERIA:
        if only and num not in only:
            continue
        result = run_criterion(num)
        outcomes.append(result)
        if out is not None:
            print(result.line(), file=out, flush=True)
    return outcomes


def main() -> int:
    outcomes = run_all()
    return 0 if all(o.passed for o in outcomes) else 1


if __name__ == "__main__":
    sys.exit(main())
