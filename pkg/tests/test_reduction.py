import threading
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from fmcycles.errors import DomainError
from fmcycles.invariants import HilbertClass
from fmcycles.oracles import bfs_orbit
from fmcycles.reduction import (
    OrbitState,
    _closure,
    _moves,
    _move_symbols,
    compress_trace,
    default_cap,
    is_terminal_form,
    lower_bound,
    normalize,
    orbit,
    orbit_dot,
    phi_successors,
    reduce,
    successors,
)
from fmcycles.transforms import PSI, PSI_HAT, compose_total


def test_orbit_state_validation():
    with pytest.raises(DomainError):
        OrbitState(3, 3)
    with pytest.raises(DomainError):
        OrbitState(0, 0)
    with pytest.raises(DomainError):
        OrbitState(-1, 0)


def test_normalize_records_psi_powers():
    state, trace = normalize(HilbertClass(3, 8))
    assert state == OrbitState(3, 2) and trace == (PSI_HAT, PSI_HAT)
    state, trace = normalize(HilbertClass(3, -1))
    assert state == OrbitState(3, 2) and trace == (PSI,)
    with pytest.raises(DomainError):
        normalize(HilbertClass(0, -2))


def test_phi_only_successors_of_3_2():
    # only the v values up to 11 give the two listed targets; 12 adds v = 12
    assert phi_successors(OrbitState(3, 2), 3, 11) == {OrbitState(3, 1), OrbitState(6, 5)}
    assert phi_successors(OrbitState(3, 2), 3, 12) == {OrbitState(3, 1), OrbitState(6, 5), OrbitState(12, 7)}


def test_successors_include_phihat_moves():
    got = successors(OrbitState(3, 2), 3, 12)
    assert phi_successors(OrbitState(3, 2), 3, 12) <= got
    assert OrbitState(0, 1) in got


def test_torsion_successor_examples():
    assert OrbitState(0, 1) in successors(OrbitState(3, 1), 3, 10)
    for r in range(1, 8):
        assert OrbitState(0, r) in successors(OrbitState(r, 0), 1, 10)
    with pytest.raises(DomainError):
        successors(OrbitState(0, 4), 2, 10)


@pytest.mark.parametrize("h", [1, 2, 3, 4, 5])
def test_move_soundness(h):
    for r in range(1, 13):
        for d in range(r):
            for mv in _moves(r, d, h, 60):
                end = compose_total(_move_symbols(mv), HilbertClass(r, d), h)
                target = HilbertClass(*mv[0])
                assert end in (target, -target), (r, d, mv)


@pytest.mark.parametrize("hc,h,expected", [
    (HilbertClass(6, 4), 1, OrbitState(0, 2)),
    (HilbertClass(3, 2), 3, OrbitState(0, 1)),
    (HilbertClass(5, 0), 2, OrbitState(5, 0)),
    (HilbertClass(0, 7), 4, OrbitState(0, 7)),
])
def test_reduce_examples(hc, h, expected):
    res = reduce(hc, h)
    assert res.terminal == expected
    assert not res.capped
    assert res.replay() in (expected.as_class(), -expected.as_class())


def test_reduce_trace_of_3_2():
    res = reduce(HilbertClass(3, 2), 3)
    assert compress_trace(res.trace) == "psihat,phihat"


def test_reduce_rejects_empty_moduli():
    for hc in (HilbertClass(-1, 0), HilbertClass(0, 0), HilbertClass(0, -3)):
        with pytest.raises(DomainError):
            reduce(hc, 2)
    with pytest.raises(DomainError):
        reduce(HilbertClass(2, 1), 0)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 50), st.integers(-50, 50))
def test_gcd_law(r, d):
    assert reduce(HilbertClass(r, d), 1).terminal == OrbitState(0, gcd(r, d))


@pytest.mark.parametrize("h", [1, 2, 3, 4, 5, 6])
def test_reduce_is_orbit_minimum_and_terminal_form(h):
    for r in range(1, 14):
        for d in range(r):
            res = reduce(HilbertClass(r, d), h, 80)
            states = orbit(HilbertClass(r, d), h, 80)
            assert res.terminal == states[0]
            assert all(res.terminal <= s for s in states)
            assert is_terminal_form(res.terminal, h)
            assert res.replay() in (res.terminal.as_class(), -res.terminal.as_class())


@pytest.mark.parametrize("h", [1, 2, 3, 5])
def test_orbit_matches_independent_bfs(h):
    for r in range(1, 11):
        for d in range(r):
            assert {(s.r, s.d) for s in orbit(HilbertClass(r, d), h, 40)} == bfs_orbit(r, d, h, 40)


def test_orbit_cache_agrees_with_fresh_search():
    for h in (2, 3):
        for r in range(1, 12):
            for d in range(r):
                cached = {(s.r, s.d) for s in orbit(HilbertClass(r, d), h, 50)}
                assert cached == set(_closure((r, d), h, 50))


def test_orbit_is_thread_safe():
    results = {}

    def work(i):
        results[i] = orbit(HilbertClass(7 + i, 3), 2, 60)

    threads = [threading.Thread(target=work, args=(i,)) for i in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for i, states in results.items():
        assert [(s.r, s.d) for s in states] == sorted(bfs_orbit(7 + i, 3, 2, 60))


def test_orbit_examples():
    assert OrbitState(0, 1) in orbit(HilbertClass(2, 1), 1, 8)
    states = orbit(HilbertClass(1, 0), 2, 8)
    assert states[0] == OrbitState(1, 0) and len(states) > 1
    assert orbit(HilbertClass(0, 4), 3, 8) == [OrbitState(0, 4)]


@pytest.mark.parametrize("h", [1, 2, 3, 4, 5])
def test_invariants_along_orbits(h):
    for r in range(1, 12):
        for d in range(r):
            g = gcd(r, d)
            for s in orbit(HilbertClass(r, d), h, 60):
                assert gcd(s.r, s.d) == g
                assert (s.r // g) % h in ((r // g) % h, (-(r // g)) % h)


def test_lower_bound_is_attained_in_range():
    for h in (1, 2, 3, 4):
        for r in range(1, 16):
            for d in range(r):
                assert reduce(HilbertClass(r, d), h).terminal == OrbitState(*lower_bound(HilbertClass(r, d), h))


@pytest.mark.parametrize("h", [2])
def test_e2_terminals(h):
    for r in range(1, 21):
        for d in range(r):
            t = reduce(HilbertClass(r, d), h).terminal
            assert t.d == 0 or t.r == 0


def test_is_terminal_form():
    assert is_terminal_form(OrbitState(0, 3), 2)
    assert not is_terminal_form(OrbitState(4, 0), 1)
    assert is_terminal_form(OrbitState(4, 0), 2)
    assert is_terminal_form(OrbitState(3, 2), 3)
    assert reduce(HilbertClass(3, 2), 3).terminal == OrbitState(0, 1)
    assert not is_terminal_form(OrbitState(5, 1), 3)


def test_capped_flag_when_cap_too_small():
    res = reduce(HilbertClass(19, 10), 4, cap=19)
    full = reduce(HilbertClass(19, 10), 4, cap=200)
    assert full.terminal == OrbitState(1, 0) and not full.capped
    if res.terminal != full.terminal:
        assert res.capped


def test_default_cap():
    assert default_cap(HilbertClass(3, 2), 3) == 3 * 3 + 2 * 3 + 3


def test_dot_output():
    dot = orbit_dot(HilbertClass(2, 1), 1, 4)
    assert dot.startswith("digraph orbit {")
    assert '"2,1" [shape=box]' in dot
    assert '"0,1" [style=bold]' in dot
    assert dot.rstrip().endswith("}")


def test_compress_trace():
    assert compress_trace([PSI, PSI, PSI, PSI_HAT]) == "psi^3,psihat"
    assert compress_trace([]) == ""
