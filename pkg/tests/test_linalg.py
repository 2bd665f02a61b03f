from fractions import Fraction

import sympy
from hypothesis import given, settings, strategies as st

from fmcycles.linalg import nullity, rank

entries = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5), st.integers(1, 6), st.data())
def test_rank_matches_sympy(nrows, ncols, data):
    rows = [[data.draw(entries) for _ in range(ncols)] for _ in range(nrows)]
    # sparse rows make rank deficiency likely
    rows = [[x if data.draw(st.booleans()) else Fraction(0) for x in row] for row in rows]
    assert rank(rows, ncols) == sympy.Matrix(rows).rank()
    assert nullity(rows, ncols) == ncols - sympy.Matrix(rows).rank()


def test_small_cases():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([]) == 0
    assert nullity([], 0) == 0
    assert nullity([[0, 0, 0]], 3) == 3
    assert rank([[Fraction(1, 3), Fraction(1, 2)], [2, 3]]) == 1
