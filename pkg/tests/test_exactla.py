import json
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from riglab.detideals import MinorSpec, Pattern
from riglab.errors import ArgumentError, PatternError
from riglab.exactla import (
    ParamPoint,
    RationalMatrix,
    bareiss_det,
    bareiss_rank,
    corner_pattern,
    dimension_witness,
    expected_dimension,
    jacobian_at,
    param_names,
    random_param_point,
    sample_U,
    sample_rank_variety,
    support,
)
from riglab.verify import naive_rank

entries = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))


@st.composite
def matrices(draw, max_dim=5):
    rows = draw(st.integers(1, max_dim))
    cols = draw(st.integers(1, max_dim))
    k = draw(st.integers(0, min(rows, cols)))
    if k == 0:
        return RationalMatrix.zeros(rows, cols)
    L = RationalMatrix([[draw(entries) for _ in range(k)] for _ in range(rows)])
    R = RationalMatrix([[draw(entries) for _ in range(cols)] for _ in range(k)])
    return L @ R


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_bareiss_rank_matches_naive(M):
    assert bareiss_rank(M) == naive_rank(M)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(entries, min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_bareiss_det_matches_sympy(rows):
    M = RationalMatrix(rows)
    expected = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in r] for r in rows]).det()
    assert bareiss_det(M) == Fraction(int(expected.p), int(expected.q))


def test_det_sign_and_singular():
    assert bareiss_det(RationalMatrix([[0, 1], [1, 0]])) == -1
    assert bareiss_det(RationalMatrix([[1, 2], [2, 4]])) == 0
    assert bareiss_det(RationalMatrix([])) == 1
    with pytest.raises(ArgumentError):
        bareiss_det(RationalMatrix([[1, 2, 3]]))


def test_inverse_and_products():
    M = RationalMatrix([[2, 1], [Fraction(1, 2), 3]])
    assert M @ M.inverse() == RationalMatrix.identity(2)
    with pytest.raises(ArgumentError):
        RationalMatrix([[1, 1], [1, 1]]).inverse()
    with pytest.raises(ArgumentError):
        RationalMatrix([[1, 2], [3]])


def test_json_round_trip_and_support():
    M = RationalMatrix([[Fraction(1, 3), 0], [-2, 5]])
    back = RationalMatrix.from_json(json.dumps(M.to_json()))
    assert back == M
    assert support(M) == Pattern(2, ((0, 0), (1, 0), (1, 1)))
    with pytest.raises(ArgumentError):
        RationalMatrix.from_json({"rows": 3, "cols": 2, "entries": [["1", "2"]]})


@pytest.mark.parametrize("n", [3, 4])
def test_rank_sampler_exact_rank(n):
    rng = random.Random(11)
    for s in range(n + 1):
        for _ in range(4):
            rows = tuple(sorted(rng.sample(range(n), s)))
            cols = tuple(sorted(rng.sample(range(n), s)))
            M = sample_rank_variety(n, s, MinorSpec(rows, cols), rng)
            assert bareiss_rank(M) == s
            assert bareiss_det(M.submatrix(rows, cols)) != 0


def test_rank_sampler_rejects_bad_tau():
    with pytest.raises(ArgumentError):
        sample_rank_variety(3, 2, MinorSpec((0,), (0,)))
    with pytest.raises(ArgumentError):
        sample_rank_variety(3, 4)


def test_sample_U_has_rank_r_off_pattern():
    rng = random.Random(5)
    pt = random_param_point(4, 2, 0, rng)
    assert bareiss_rank(sample_U(4, 2, Pattern(4), pt)) == 2
    with pytest.raises(PatternError):
        sample_U(4, 2, Pattern(4, ((0, 3),)), random_param_point(4, 2, 1, rng))
    with pytest.raises(ArgumentError):
        ParamPoint(RationalMatrix([[1, 1], [1, 1]]), RationalMatrix.zeros(2), RationalMatrix.zeros(2), ())


def true_jacobian_rows(n, r, pattern, pt):
    """Exact differential via dU22 = dX + dB Gi A + B Gi dA - B Gi dG Gi A."""
    m = n - r
    names = param_names(n, r, len(pattern))
    Gi = pt.G.inverse()
    cols = []
    for idx, name in enumerate(names):
        dG = RationalMatrix.zeros(r)
        dA = RationalMatrix.zeros(r, m)
        dB = RationalMatrix.zeros(m, r)
        dX = RationalMatrix.zeros(m)
        kind, rest = name[0], name[1:]
        if kind == "p":
            i, j = pattern.positions[int(rest)]
            dX = dX.with_entry(i - r, j - r, 1)
        else:
            i, j = (int(s) for s in rest.split("_"))
            if kind == "g":
                dG = dG.with_entry(i, j, 1)
            elif kind == "a":
                dA = dA.with_entry(i, j, 1)
            else:
                dB = dB.with_entry(i, j, 1)
        d22 = dX + dB @ Gi @ pt.A + pt.B @ Gi @ dA - pt.B @ Gi @ dG @ Gi @ pt.A
        full = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i < r and j < r:
                    full[i][j] = dG[i, j]
                elif i < r:
                    full[i][j] = dA[i, j - r]
                elif j < r:
                    full[i][j] = dB[i - r, j]
                else:
                    full[i][j] = d22[i - r, j - r]
        cols.append([v for row in full for v in row])
    return RationalMatrix(cols).transpose()


@pytest.mark.parametrize("n,r,k", [(3, 1, 2), (4, 2, 3)])
def test_scaled_jacobian_matches_matrix_calculus(n, r, k):
    rng = random.Random(8)
    pattern = corner_pattern(n, r, k)
    for _ in range(2):
        pt = random_param_point(n, r, k, rng)
        D2 = bareiss_det(pt.G) ** 2
        J = jacobian_at(n, r, pattern, pt)
        T = true_jacobian_rows(n, r, pattern, pt)
        for i in range(n):
            for j in range(n):
                row = i * n + j
                scale = D2 if (i >= r and j >= r) else 1
                assert list(J.rows[row]) == [scale * v for v in T.rows[row]]
        assert bareiss_rank(J) == bareiss_rank(T) == expected_dimension(n, r, k)


@pytest.mark.parametrize("n,r,k", [(3, 1, 0), (3, 1, 3), (4, 2, 2), (2, 1, 1), (3, 0, 4), (3, 3, 0)])
def test_dimension_witness(n, r, k):
    rep = dimension_witness(n, r, k, points=5, seed=1)
    assert rep["ok"]
    assert rep["ranks"] == [n * n - (n - r) ** 2 + k] * 5
    assert rep["expected"] <= rep["upper_bound"]


def test_dimension_witness_checks_arguments():
    with pytest.raises(ArgumentError):
        dimension_witness(3, 1, 5)
