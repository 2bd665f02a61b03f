import itertools
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fmcycles.curves import ChainCurve, CycleCurve, Node, SmoothPoint
from fmcycles.errors import DomainError, MalformedInput
from fmcycles.invariants import ChainLineBundle, CycleLineBundle, KClass
from fmcycles.oracles import pushforward_invariants, subcurve_verdict
from fmcycles.sheaves import (
    MinusOneOnComponent,
    SheafDescriptor,
    StabilityVerdict as V,
    StableLineBundle,
    degree0_semistable,
    degree0_stable,
    descriptor_stability,
    enumerate_indecomposables,
    factor_sheaf,
    format_factors,
    graded_degree0,
    hilbert_class,
    invariants_of,
    is_locally_free,
    is_nonperiodic,
    line_bundle_stability,
    locally_free_defect,
    maximal_ideal_sheaf,
    nlf,
    pullback_multidegree,
    stability,
    vb,
    with_host,
)

E2 = CycleCurve(2)
E3 = CycleCurve(3)


def test_invariants_examples():
    assert invariants_of(vb(E2, (1, -1), m=2)) == (KClass((2, 2), 0), (2, -2))
    assert invariants_of(nlf(E2, (0, -1))) == (KClass((1, 1), 0), (0, -1))
    assert invariants_of(vb(E2, (1, -1, 0, 0), cover=2)) == (KClass((2, 2), 0), (1, -1))


def test_invariants_agree_with_fibre_sums():
    for n in (1, 2, 3):
        for x in enumerate_indecomposables(CycleCurve(n), max_cover=2, max_m=2, max_length=4, max_abs_degree=1):
            kc, md = invariants_of(x)
            assert (kc.multirank, kc.chi, md) == pushforward_invariants(x)


def test_descriptor_invariants_add():
    a, b = vb(E2, (1, -1)), nlf(E2, (0, -1), start=1)
    kc, md = invariants_of(SheafDescriptor.of(a, b))
    (ka, ma), (kb, mb) = invariants_of(a), invariants_of(b)
    assert kc == ka + kb
    assert md == tuple(x + y for x, y in zip(ma, mb))


def test_nonperiodic_examples():
    assert is_nonperiodic((1, -1, 0, 0), 2, 2)
    assert not is_nonperiodic((1, -1, 1, -1), 2, 2)
    assert is_nonperiodic((5, 5), 1, 2)
    with pytest.raises(MalformedInput):
        is_nonperiodic((1, 2, 3), 2, 2)


def test_periodic_cover_rejected():
    with pytest.raises(MalformedInput):
        vb(E2, (1, -1, 1, -1), cover=2)
    with pytest.raises(MalformedInput):
        vb(E2, (1, -1, 0), cover=2)
    with pytest.raises(MalformedInput):
        vb(E2, (0, 0), m=0)


def test_locally_free_examples():
    v, c = vb(E2, (1, -1)), nlf(E2, (0, -1))
    assert is_locally_free(SheafDescriptor.of(v)) and locally_free_defect(SheafDescriptor.of(v)) == 0
    assert not is_locally_free(SheafDescriptor.of(c))
    assert locally_free_defect(SheafDescriptor.of(c)) < 0
    both = SheafDescriptor.of(v, c)
    assert not is_locally_free(both)
    assert locally_free_defect(both) == locally_free_defect(SheafDescriptor.of(c))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_locally_free_defect_exhaustive(n):
    host = CycleCurve(n)
    for x in enumerate_indecomposables(host, max_cover=2, max_m=2, max_length=4, max_abs_degree=2):
        defect = locally_free_defect(SheafDescriptor.of(x))
        assert defect <= 0
        assert (defect == 0) == (x.kind == "vb")


def test_line_bundle_examples():
    assert line_bundle_stability(CycleLineBundle((0, 0)), E2) is V.STABLE
    assert line_bundle_stability(CycleLineBundle((2, -2)), E2) is V.UNSTABLE
    assert line_bundle_stability(CycleLineBundle((1, -1)), E2) is V.STRICTLY_SEMISTABLE


def test_line_bundle_argument_errors():
    with pytest.raises(MalformedInput):
        line_bundle_stability(ChainLineBundle((0, -1)), ChainCurve(2))
    with pytest.raises(MalformedInput):
        line_bundle_stability(CycleLineBundle((0, 0)), ChainCurve(2), (1, 1))
    with pytest.raises(MalformedInput):
        line_bundle_stability(CycleLineBundle((0, 0, 0)), E2)


@settings(max_examples=300, deadline=None)
@given(
    st.integers(2, 5).flatmap(
        lambda n: st.tuples(
            st.lists(st.integers(-3, 3), min_size=n, max_size=n),
            st.lists(st.integers(1, 3), min_size=n, max_size=n),
            st.booleans(),
        )
    )
)
def test_arc_test_matches_all_subcurves(data):
    md, pol, is_cycle = data
    n = len(md)
    if is_cycle:
        bundle, curve, chi = CycleLineBundle(tuple(md)), CycleCurve(n, tuple(pol)), sum(md)
        got = line_bundle_stability(bundle, curve)
    else:
        bundle, curve, chi = ChainLineBundle(tuple(md)), ChainCurve(n), sum(md) + 1
        got = line_bundle_stability(bundle, curve, pol)
    assert got is subcurve_verdict(md, pol, chi, is_cycle)


def test_gluing_does_not_change_verdict():
    for md in itertools.product(range(-2, 3), repeat=3):
        verdicts = {line_bundle_stability(CycleLineBundle(md, Fraction(g)), E3) for g in (1, -2, Fraction(7, 3))}
        assert len(verdicts) == 1


def test_degree0_semistable_examples():
    assert degree0_semistable(vb(E2, (1, -1)))
    assert not degree0_semistable(vb(E2, (2, -1, -1, 0), cover=2))
    assert degree0_semistable(nlf(E2, (-1,)))
    with pytest.raises(DomainError):
        degree0_semistable(vb(E2, (1, 0)))


def test_degree0_stable_examples():
    for i in range(3):
        assert degree0_stable(nlf(E3, (-1,), start=i))
    assert degree0_stable(vb(E2, (0, 0), 5))
    assert not degree0_stable(vb(E2, (0, 0), m=2))
    with pytest.raises(DomainError):
        degree0_stable(vb(CycleCurve(1), (0,)))


def _is_listed_stable(x) -> bool:
    if x.kind == "nlf":
        return x.map.length == 1 and x.bundle.multidegree == (-1,)
    return x.cover == 1 and x.m == 1 and not any(x.bundle.multidegree)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_stable_classification_is_complete(n):
    host = CycleCurve(n)
    for x in enumerate_indecomposables(host, max_cover=2, max_m=2, max_length=4, max_abs_degree=2, chi=0):
        assert degree0_stable(x) == _is_listed_stable(x), x


def test_degree0_verdicts_ignore_polarization():
    host = CycleCurve(3)
    pols = list(itertools.product((1, 2, 3), repeat=3))
    for x in enumerate_indecomposables(host, max_cover=1, max_m=2, max_length=3, max_abs_degree=1, chi=0):
        verdicts = {stability(with_host(x, CycleCurve(3, p))) for p in pols}
        assert len(verdicts) == 1, x


def test_stability_rejects_unsupported_shapes():
    with pytest.raises(DomainError):
        stability(vb(E2, (1, 0), m=2))
    assert stability(vb(E2, (1, 0))) is V.STABLE


def test_descriptor_stability():
    blocks = SheafDescriptor(E2, (nlf(E2, (-1,), 0), nlf(E2, (-1,), 1)))
    assert descriptor_stability(blocks) is V.STRICTLY_SEMISTABLE
    mixed = SheafDescriptor.of(vb(E2, (0, 0)), vb(E2, (1, 0)))
    assert descriptor_stability(mixed) is V.UNSTABLE
    bad = SheafDescriptor.of(vb(E2, (0, 0)), vb(E2, (2, -2)))
    assert descriptor_stability(bad) is V.UNSTABLE
    assert descriptor_stability(SheafDescriptor.of(vb(E2, (0, 0), 3))) is V.STABLE


def test_descriptor_needs_common_host():
    with pytest.raises(MalformedInput):
        SheafDescriptor.of(vb(E2, (0, 0)), vb(E3, (0, 0, 0)))
    with pytest.raises(MalformedInput):
        SheafDescriptor(E2, ())


def test_graded_examples():
    atiyah = SheafDescriptor.of(vb(E2, (0, 0), m=3))
    assert graded_degree0(atiyah) == (StableLineBundle(1),) * 3
    cover = SheafDescriptor.of(vb(E2, (1, -1, 0, 0), cover=2))
    assert Counter(graded_degree0(cover)) == {MinusOneOnComponent(0): 2, MinusOneOnComponent(1): 2}
    chain = SheafDescriptor.of(nlf(E2, (0, -1)))
    assert graded_degree0(chain) == (MinusOneOnComponent(0), MinusOneOnComponent(1))
    assert format_factors(graded_degree0(cover)) == "O_C1(-1)^2 + O_C2(-1)^2"


def test_graded_of_unstable_is_an_error():
    with pytest.raises(DomainError):
        graded_degree0(SheafDescriptor.of(vb(E2, (2, -2))))


@pytest.mark.parametrize("n", [2, 3])
def test_graded_consistency(n):
    host = CycleCurve(n)
    for x in enumerate_indecomposables(host, max_cover=2, max_m=2, max_length=4, max_abs_degree=2, chi=0):
        if not degree0_semistable(x):
            continue
        d = SheafDescriptor.of(x)
        factors = [factor_sheaf(f, host) for f in graded_degree0(d)]
        assert invariants_of(SheafDescriptor(host, tuple(factors)))[0] == invariants_of(d)[0]
        assert all(degree0_stable(f) for f in factors)


def test_maximal_ideal_examples():
    (x,) = maximal_ideal_sheaf(E2, SmoothPoint(0, Fraction(3))).summands
    assert x.kind == "vb" and x.bundle.multidegree == (-1, 0) and x.bundle.gluing == 3
    (y,) = maximal_ideal_sheaf(E3, Node(0)).summands
    assert (y.map.length, y.map.start, y.bundle.multidegree) == (3, 1, (-1, 0, -1))
    (z,) = maximal_ideal_sheaf(E2, Node(1)).summands
    assert (z.map.length, z.map.start, z.bundle.multidegree) == (2, 0, (-1, -1))
    with pytest.raises(MalformedInput):
        maximal_ideal_sheaf(E2, Node(2))


def test_maximal_ideals_are_stable_with_chi_minus_one():
    for n in range(1, 5):
        for pol in itertools.product((1, 2), repeat=n):
            curve = CycleCurve(n, pol)
            points = [Node(j) for j in range(n)]
            points += [SmoothPoint(i, c) for i in range(n) for c in (1, Fraction(-5, 2))]
            for p in points:
                d = maximal_ideal_sheaf(curve, p)
                kc, _ = invariants_of(d)
                assert kc == KClass((1,) * n, -1)
                assert descriptor_stability(d) is V.STABLE, (pol, p)


def test_pullback_multidegree():
    assert pullback_multidegree((1, -1), 2) == (1, -1, 1, -1)
    assert pullback_multidegree((3, 0, 2), 1) == (3, 0, 2)
    with pytest.raises(MalformedInput):
        pullback_multidegree((1,), 0)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=4), st.integers(1, 3))
def test_pullback_preserves_slope(md, s):
    n = len(md)
    up = pullback_multidegree(md, s)
    assert sum(up) * n == s * n * sum(md)
    assert line_bundle_stability(CycleLineBundle(tuple(md)), CycleCurve(n)).is_semistable == \
        line_bundle_stability(CycleLineBundle(up), CycleCurve(s * n)).is_semistable


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4), st.integers(1, 4))
def test_atiyah_slope_law(md, m):
    host = CycleCurve(len(md))
    assert hilbert_class(vb(host, md, m=m)) == hilbert_class(vb(host, md)) * m
