import random

import pytest
import sympy

from riglab.detideals import (
    Pattern,
    all_patterns,
    build_symbolic,
    crosscheck_prop14,
    determinant,
    elimination_ideal_direct,
    elimination_ideal_reduced,
    generic_matrix,
    minors,
    rigidity_ideal,
    x_name,
    x_registry,
)
from riglab.errors import ArgumentError, PatternError
from riglab.groebner import buchberger
from riglab.polyring import LEX, parse_polynomial, to_text


def reduced(ideal):
    return [to_text(g) for g in buchberger(ideal, LEX).basis]


def test_pattern_parse_forms():
    assert Pattern.parse("0,0", 3).positions == ((0, 0),)
    assert Pattern.parse("1,2;0,1", 3).positions == ((0, 1), (1, 2))
    assert Pattern.parse("diag", 3) == Pattern.diagonal(3)
    assert len(Pattern.parse("", 3)) == 0
    assert str(Pattern.parse("2,2;0,0", 3)) == "0,0;2,2"
    for bad in ("3,0", "0;1", "a,b", "0,0;0,0"):
        with pytest.raises(PatternError):
            Pattern.parse(bad, 3)


def test_all_patterns_counts_and_order():
    pats = list(all_patterns(3, 2))
    assert len(pats) == 36
    assert pats[0].positions == ((0, 0), (0, 1))
    assert [p.positions for p in pats] == sorted(p.positions for p in pats)


def test_determinant_matches_sympy():
    reg, entries = generic_matrix(4)
    det = determinant(entries)
    X = sympy.Matrix(4, 4, lambda i, j: sympy.Symbol(x_name(4, i, j)))
    expected = parse_polynomial(str(sympy.expand(X.det())).replace("**", "^"), reg)
    assert det == expected
    assert determinant(entries, (), (), reg) == 1 + 0 * det


def test_minor_counts():
    m = build_symbolic(3, Pattern(3, ((0, 0),)))
    assert len(minors(m, 2)) == 9
    assert len(minors(generic_matrix(4), 2)) == 36
    with pytest.raises(ArgumentError):
        minors(m, 4)


def test_rigidity_ideal_single_corner():
    ideal = rigidity_ideal(3, 1, Pattern(3, ((0, 0),)))
    reg = ideal.registry
    assert reg.names[0] == "t1"
    expected = {
        "t1*x5 + x1*x5 - x2*x4", "t1*x6 + x1*x6 - x3*x4", "x2*x6 - x3*x5",
        "t1*x8 + x1*x8 - x2*x7", "t1*x9 + x1*x9 - x3*x7", "x2*x9 - x3*x8",
        "x4*x8 - x5*x7", "x4*x9 - x6*x7", "x5*x9 - x6*x8",
    }
    assert {to_text(g) for g in ideal.generators} == expected


def test_rank_argument_checked():
    with pytest.raises(ArgumentError):
        rigidity_ideal(3, 3, Pattern(3))
    with pytest.raises(ArgumentError):
        elimination_ideal_reduced(3, -1, Pattern(3))
    with pytest.raises(PatternError):
        elimination_ideal_direct(3, 1, Pattern(2))


def test_single_corner_elimination_both_routes():
    expected = ["x2*x6 - x3*x5", "x2*x9 - x3*x8", "x4*x8 - x5*x7", "x4*x9 - x6*x7", "x5*x9 - x6*x8"]
    p = Pattern(3, ((0, 0),))
    assert reduced(elimination_ideal_direct(3, 1, p)) == expected
    assert reduced(elimination_ideal_reduced(3, 1, p)) == expected


def test_diagonal_elimination():
    ei = elimination_ideal_direct(3, 1, Pattern.diagonal(3))
    assert reduced(ei) == ["x2*x6*x7 - x3*x4*x8"]


def test_two_by_two_empty_pattern():
    assert reduced(elimination_ideal_reduced(2, 1, Pattern(2))) == ["x1*x4 - x2*x3"]


def test_full_rank_patterns_give_zero_ideal():
    # four changes always suffice for rank one at n = 3
    p = Pattern(3, ((1, 1), (1, 2), (2, 1), (2, 2)))
    assert elimination_ideal_reduced(3, 1, p).is_zero()


@pytest.mark.parametrize("size", [1, 2])
def test_crosscheck_exhaustive(size):
    for p in all_patterns(3, size):
        assert crosscheck_prop14(3, 1, p) is True, str(p)


def test_crosscheck_diagonal_and_rank_two():
    assert crosscheck_prop14(3, 1, Pattern.diagonal(3)) is True
    assert crosscheck_prop14(3, 2, Pattern(3, ((0, 0), (1, 1)))) is True


def test_crosscheck_indeterminate_under_tiny_caps():
    from riglab.groebner import Caps

    assert crosscheck_prop14(3, 1, Pattern.diagonal(3), Caps(max_basis=1, max_terms=1)) is None


def rename_ideal(ideal, n, rp, cp):
    reg = x_registry(n)
    rename = {x_name(n, i, j): x_name(n, rp[i], cp[j]) for i in range(n) for j in range(n)}
    return type(ideal)(reg, tuple(g.embed(reg, LEX, rename) for g in ideal.generators))


def test_elimination_is_permutation_equivariant():
    rng = random.Random(3)
    for p in list(all_patterns(3, 2))[::5] + [Pattern.diagonal(3)]:
        rp = rng.sample(range(3), 3)
        cp = rng.sample(range(3), 3)
        moved = elimination_ideal_reduced(3, 1, p.permuted(rp, cp))
        renamed = rename_ideal(elimination_ideal_reduced(3, 1, p), 3, rp, cp)
        assert reduced(moved) == reduced(renamed)
