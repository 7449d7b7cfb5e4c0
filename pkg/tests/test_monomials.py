import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarforge.monomials import (
    Monomial,
    MonomialSpace,
    admissible_frontier,
    decreasing_closure,
    evaluate,
    generator_matrix,
    index_of,
    is_decreasing,
    lower_covers,
    monomial_of,
    precedes,
    upper_covers,
)


def mono(*v):
    return Monomial.from_vars(v)


def test_space_limits():
    assert MonomialSpace(3).N == 8
    assert MonomialSpace.from_length(1024).m == 10
    with pytest.raises(ValueError):
        MonomialSpace(0)
    with pytest.raises(ValueError):
        MonomialSpace(31)
    with pytest.raises(ValueError):
        MonomialSpace.from_length(96)


def test_index_of_examples():
    assert index_of(mono(0), MonomialSpace(1)) == 0
    assert index_of(mono(), MonomialSpace(2)) == 3
    assert index_of(mono(0), MonomialSpace(2)) == 2
    with pytest.raises(ValueError):
        index_of(mono(3), MonomialSpace(3))


def test_monomial_of_examples():
    sp = MonomialSpace(3)
    assert monomial_of(7, sp).degree == 0
    assert monomial_of(0, sp) == mono(0, 1, 2)
    assert monomial_of(1, MonomialSpace(2)) == mono(1)
    with pytest.raises(IndexError):
        monomial_of(8, sp)


def test_evaluate_examples():
    sp = MonomialSpace(2)
    np.testing.assert_array_equal(evaluate(mono(), sp), [1, 1, 1, 1])
    np.testing.assert_array_equal(evaluate(mono(0, 1), sp), [1, 0, 0, 0])
    for v in range(3):
        assert evaluate(mono(v), MonomialSpace(3)).sum() == 4


@pytest.mark.parametrize("m", range(1, 7))
def test_row_identity_and_weight_law(m):
    sp = MonomialSpace(m)
    G = generator_matrix(m)
    for i in range(sp.N):
        f = monomial_of(i, sp)
        assert index_of(f, sp) == i
        np.testing.assert_array_equal(evaluate(f, sp), G[i])
        assert G[i].sum() == 2 ** (m - f.degree) == 2 ** bin(i).count("1")


def test_precedes_examples():
    assert precedes(mono(0, 1), mono(0, 2))
    assert precedes(mono(0), mono(0, 1))
    assert not precedes(mono(2), mono(0, 1))


def _precedes_by_divisors(f, g):
    """Reference rule: same degree compares sorted variables, lower degree
    needs some divisor of g of equal degree above f."""
    if f.degree > g.degree:
        return False
    if f.degree == g.degree:
        return all(a <= b for a, b in zip(f.vars, g.vars))
    return any(
        _precedes_by_divisors(f, Monomial.from_vars(sub))
        for sub in itertools.combinations(g.vars, f.degree)
    )


@pytest.mark.parametrize("m", range(1, 5))
def test_partial_order_axioms(m):
    monos = MonomialSpace(m).monomials()
    rel = {(f, g): precedes(f, g) for f in monos for g in monos}
    for f in monos:
        assert rel[f, f]
    for f, g in itertools.product(monos, repeat=2):
        assert rel[f, g] == _precedes_by_divisors(f, g)
        if rel[f, g]:
            assert f.degree <= g.degree
            if rel[g, f]:
                assert f == g
    for f, g, h in itertools.product(monos, repeat=3):
        if rel[f, g] and rel[g, h]:
            assert rel[f, h]


@pytest.mark.parametrize("m", range(1, 6))
def test_covers_generate_the_order(m):
    sp = MonomialSpace(m)
    below = {}
    for i in range(sp.N - 1, -1, -1):
        s = {i}
        for c in lower_covers(i, m):
            s |= below[c]
        below[i] = s
    for i in range(sp.N):
        f = monomial_of(i, sp)
        expected = {j for j in range(sp.N) if precedes(monomial_of(j, sp), f)}
        assert below[i] == expected
        for c in lower_covers(i, m):
            assert i in upper_covers(c, m)


def test_is_decreasing_examples():
    sp = MonomialSpace(2)
    assert is_decreasing(range(4), sp)[0]
    assert is_decreasing([], sp) == (True, [])
    ok, viol = is_decreasing([index_of(mono(0, 1), sp)], sp)
    assert not ok
    missing = {g for g, _ in viol}
    assert missing == {index_of(mono(0), sp), index_of(mono(1), sp), index_of(mono(), sp)}


def test_closure_examples():
    sp = MonomialSpace(2)
    assert decreasing_closure({3}, sp) == {3}
    assert decreasing_closure({index_of(mono(0, 1), sp)}, sp) == {0, 1, 2, 3}


def test_frontier_examples():
    sp = MonomialSpace(2)
    assert admissible_frontier(set(), sp) == {3}
    # x0 precedes x1, so x1 only becomes admissible once x0 is present
    assert admissible_frontier({3}, sp, cap_degree=1) == {index_of(mono(0), sp)}
    assert admissible_frontier({3, 2}, sp, cap_degree=1) == {index_of(mono(1), sp)}
    assert admissible_frontier(set(range(4)), sp) == set()


def test_frontier_respects_cap():
    sp = MonomialSpace(3)
    S = decreasing_closure({index_of(mono(2), sp)}, sp)
    front = admissible_frontier(S, sp, cap_degree=1)
    assert all(monomial_of(i, sp).degree <= 1 for i in front)


@settings(max_examples=60, deadline=None)
@given(m=st.integers(1, 6), data=st.data())
def test_closure_and_frontier_properties(m, data):
    sp = MonomialSpace(m)
    seed = data.draw(st.sets(st.integers(0, sp.N - 1), max_size=4))
    S = decreasing_closure(seed, sp)
    assert is_decreasing(S, sp)[0]
    assert decreasing_closure(S, sp) == S
    for i in admissible_frontier(S, sp):
        assert is_decreasing(S | {i}, sp)[0]
