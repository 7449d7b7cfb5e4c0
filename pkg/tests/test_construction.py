import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarforge.construction import (
    DesignSpec,
    InfeasibleDesignError,
    compare_sets,
    construct,
    construct_mixed,
    construct_reliability,
    degree_cap_feasible,
    mixed_cost,
    rm_information_set,
    rm_rstar,
    staircase_sweep,
)
from polarforge.monomials import Monomial, MonomialSpace, index_of, is_decreasing
from polarforge.reliability import bec, biawgn, channel_bhattacharyya
from polarforge.spectrum import awmin_of, ub_min_weight, wmin_of


def spec128(**kw):
    return DesignSpec(m=7, K=64, channel=biawgn(4.0, 0.5), **kw)


def test_spec_validation():
    with pytest.raises(InfeasibleDesignError):
        DesignSpec(m=3, K=0, channel=bec(0.5))
    with pytest.raises(InfeasibleDesignError):
        DesignSpec(m=3, K=9, channel=bec(0.5))
    with pytest.raises(InfeasibleDesignError):
        DesignSpec(m=3, K=4, channel=bec(0.5), alpha=-1.0)
    with pytest.raises(InfeasibleDesignError):
        DesignSpec(m=4, K=8, channel=bec(0.5), degree_cap=1)
    assert degree_cap_feasible(4, 8, 2)
    assert not degree_cap_feasible(4, 8, 1)


def test_reliability_examples():
    d = construct_reliability(spec128())
    assert d.K == 64 and d.decreasing
    assert wmin_of(d.indices, d.space) == 8
    assert awmin_of(d.indices, d.space)[0] == 304
    full = construct_reliability(DesignSpec(m=5, K=32, channel=biawgn(1.0, 1.0)))
    assert full.as_set() == set(range(32))
    assert construct_reliability(DesignSpec(m=2, K=1, channel=bec(0.5))).as_set() == {3}


def test_mixed_cost_examples():
    d = construct_reliability(spec128())
    prof = d.profile
    sp = MonomialSpace(7)
    i = index_of(Monomial.from_vars((4, 5, 6)), sp)
    z = channel_bhattacharyya(biawgn(4.0, 0.5))
    assert mixed_cost(i, prof, 3, 100.0) == pytest.approx(prof.values[i] + 100 * 32768 * z**16)
    assert mixed_cost(i, prof, 3, 100.0) - prof.values[i] == pytest.approx(6.0e-3, rel=0.05)
    j = index_of(Monomial.from_vars((5, 6)), sp)
    assert mixed_cost(j, prof, 3, 100.0) == prof.values[j]
    assert mixed_cost(i, prof, 3, 0.0) == prof.values[i]


def test_mixed_pinned_case():
    rel = construct_reliability(spec128())
    mix = construct_mixed(spec128(), rel.profile, rel)
    assert mix.as_set() == set(rm_information_set(7, 3).tolist())
    assert wmin_of(mix.indices, mix.space) == 16
    assert awmin_of(mix.indices, mix.space)[0] == 94488
    assert len(rel.as_set() ^ mix.as_set()) == 10


def test_cost_identity_is_exact():
    mix = construct(spec128(strategy="mixed"))
    np.testing.assert_array_equal(mix.cost, mix.z + mix.alpha * mix.distance_penalty)
    assert mix.objective == pytest.approx(math.fsum(mix.cost[mix.indices]))


def test_objective_split_matches_union_bound():
    mix = construct(spec128(strategy="mixed"))
    first = math.fsum(mix.z[mix.indices])
    second = mix.alpha * math.fsum(mix.distance_penalty[mix.indices])
    ub = ub_min_weight(mix.indices, mix.space, biawgn(4.0, 0.5))
    assert second == pytest.approx(mix.alpha * ub, rel=1e-12)
    assert mix.objective == pytest.approx(first + second, rel=1e-12)


def test_alpha_zero_returns_reliability_set():
    rel = construct_reliability(spec128())
    mix = construct_mixed(spec128(alpha=0.0, degree_cap=rel.r))
    assert mix.as_set() == rel.as_set()


def test_large_alpha_drops_top_degree():
    rel = construct_reliability(spec128())
    mix = construct_mixed(spec128(alpha=1e12, degree_cap=rel.r - 1))
    assert wmin_of(mix.indices, mix.space) == 2 * wmin_of(rel.indices, rel.space)


@pytest.mark.parametrize("method", ["ranked", "greedy", "auto"])
def test_mixed_methods_are_decreasing(method):
    for m, K, db in ((6, 32, 3.0), (8, 128, 4.0), (8, 64, 2.0)):
        d = construct_mixed(DesignSpec(m=m, K=K, channel=biawgn(db, K / (1 << m)), method=method))
        assert d.K == K
        if method != "ranked":
            assert is_decreasing(d.indices, d.space)[0]


def test_greedy_never_beats_ranked_objective_when_both_decreasing():
    s = DesignSpec(m=8, K=128, channel=biawgn(4.0, 0.5), degree_cap=4)
    ranked = construct_mixed(DesignSpec(**{**s.__dict__, "method": "ranked"}))
    greedy = construct_mixed(DesignSpec(**{**s.__dict__, "method": "greedy"}))
    if ranked.decreasing:
        assert ranked.objective <= greedy.objective + 1e-15


@settings(max_examples=30, deadline=None)
@given(m=st.integers(3, 8), frac=st.floats(0.05, 0.95), eps=st.floats(0.01, 0.9))
def test_mixed_output_is_decreasing_of_size_k(m, frac, eps):
    N = 1 << m
    K = max(1, min(N - 1, int(frac * N)))
    d = construct_mixed(DesignSpec(m=m, K=K, channel=bec(eps), strategy="mixed"))
    assert d.K == K
    assert is_decreasing(d.indices, d.space)[0]


def test_rm_rstar_examples():
    assert rm_rstar(7, 64) == 3
    assert rm_rstar(5, 1) == 0
    assert rm_rstar(4, 8) == 2
    with pytest.raises(ValueError):
        rm_rstar(4, 17)


def test_staircase_examples():
    grid = np.linspace(0.5, 14.0, 40)
    pts = staircase_sweep(4, 8, "bec", grid)
    w = [p.wmin for p in pts]
    assert all(b >= a for a, b in zip(w, w[1:]))
    assert w[-1] == 4
    final = set(pts[-1].indices.tolist())
    assert set(rm_information_set(4, 1).tolist()) <= final <= set(rm_information_set(4, 2).tolist())
    assert [p.jump for p in pts] == [False] + [a != b for a, b in zip(w, w[1:])]
    with pytest.raises(ValueError):
        staircase_sweep(4, 8, "bec", [2.0, 1.0])


@pytest.mark.parametrize("m", range(4, 9))
def test_staircase_low_weights_vanish(m):
    N = 1 << m
    for K in (N // 4, N // 2):
        r = rm_rstar(m, K)
        pts = staircase_sweep(m, K, "bec", -np.log(np.geomspace(0.5, 1e-6, 50)))
        plateau = 1 << (m - r)
        assert pts[-1].wmin == plateau
        assert all(d >= plateau for d in pts[-1].row_weight_hist)


def test_compare_sets_examples():
    rel = construct_reliability(spec128())
    same = compare_sets(rel, rel)
    assert same.symmetric_difference == 0
    assert same.delta_sc_sum == same.delta_ub == same.delta_wmin == same.delta_awmin == 0
    s = DesignSpec(m=9, K=256, channel=biawgn(5.0, 0.5))
    a = construct_reliability(s)
    assert compare_sets(a, construct_mixed(s, a.profile, a)).symmetric_difference == 18
    s = DesignSpec(m=10, K=512, channel=biawgn(3.0, 0.5))
    a = construct_reliability(s)
    cmp = compare_sets(a, construct_mixed(s, a.profile, a))
    assert (cmp.wmin_a, cmp.wmin_b) == (16, 32)
    with pytest.raises(ValueError):
        compare_sets(a, rel)
