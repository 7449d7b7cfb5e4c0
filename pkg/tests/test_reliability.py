import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarforge.construction import construct_reliability, DesignSpec, rm_information_set
from polarforge.monomials import MonomialSpace, is_decreasing
from polarforge.reliability import (
    ChannelModel,
    bec,
    bec_bhattacharyya,
    biawgn,
    channel_bhattacharyya,
    ga_awgn,
    log_phi,
    pairwise_error,
    phi,
    phi_inv,
    qfunc,
    ranking,
)


def test_channel_validation():
    with pytest.raises(ValueError):
        bec(1.5)
    with pytest.raises(ValueError):
        biawgn(4.0, 0.0)
    with pytest.raises(ValueError):
        ChannelModel("rayleigh")
    assert biawgn(4.0, 0.5).sigma2 == pytest.approx(1.0 / (2 * 0.5 * 10**0.4))


def test_bec_examples():
    np.testing.assert_allclose(bec_bhattacharyya(1, 0.5).values, [0.75, 0.25])
    # index 1 = (minus, plus), index 2 = (plus, minus) with the first step on the top bit
    np.testing.assert_allclose(bec_bhattacharyya(2, 0.5).values, [0.9375, 0.5625, 0.4375, 0.0625])
    assert np.all(bec_bhattacharyya(5, 0.0).values == 0.0)
    assert np.all(bec_bhattacharyya(5, 1.0).values == 1.0)


@settings(max_examples=40, deadline=None)
@given(m=st.integers(1, 10), eps=st.floats(0.0, 1.0))
def test_bec_conservation(m, eps):
    z = bec_bhattacharyya(m, eps).values
    assert math.fsum(z) == pytest.approx((1 << m) * eps, rel=1e-9, abs=1e-12)
    assert z[-1] == pytest.approx(eps ** (1 << m), rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("profile", [bec_bhattacharyya(8, 0.3), ga_awgn(8, 2.0, 0.5)])
def test_degradation_order(profile):
    # the last polarization step splits each node into leaves 2j (minus) and 2j+1 (plus)
    v = profile.values
    assert np.all(v[1::2] <= v[0::2])


def test_ga_root_and_extremes():
    prof = ga_awgn(7, 4.0, 0.5)
    root = 4 * 0.5 * 10**0.4
    assert root == pytest.approx(5.0238, abs=1e-4)
    assert prof.mean_llr[-1] == pytest.approx(root * 128)
    assert np.argmax(prof.mean_llr) == 127
    assert np.argmin(prof.values) == 127


def test_ga_sum_for_128_64():
    prof = ga_awgn(7, 4.0, 0.5)
    top = ranking(prof)[:64]
    assert math.fsum(prof.values[top]) == pytest.approx(2.29e-3, rel=0.05)


def test_phi_round_trip():
    x = np.geomspace(1e-3, 100, 400)
    back = phi_inv(phi(x))
    assert np.all(np.abs(back - x) <= 1e-6 * np.maximum(1.0, x))


def test_qfunc_values():
    assert qfunc(0.0) == pytest.approx(0.5)
    assert qfunc(3.0) == pytest.approx(1.3498980316e-3, rel=1e-9)


def test_channel_bhattacharyya_examples():
    assert channel_bhattacharyya(bec(0.3)) == 0.3
    assert channel_bhattacharyya(biawgn(4.0, 0.5)) == pytest.approx(0.2848, abs=1e-4)
    z5 = channel_bhattacharyya(biawgn(5.0, 0.5))
    assert z5 == pytest.approx(0.2058, abs=1e-4)
    assert 18528 * z5**16 == pytest.approx(1.9e-7, rel=0.05)


def test_pairwise_error():
    with pytest.raises(ValueError):
        pairwise_error(0, bec(0.2))
    assert pairwise_error(1, bec(0.2)) == 0.2
    assert pairwise_error(8, biawgn(4.0, 0.5)) == pytest.approx(4.3e-5, rel=0.02)
    with pytest.raises(ValueError):
        pairwise_error(3, bec(0.2), mode="qfunc")
    for mode in ("bhattacharyya", "qfunc"):
        p = [pairwise_error(w, biawgn(2.0, 0.5), mode) for w in range(1, 30)]
        assert all(b <= a for a, b in zip(p, p[1:]))


def test_ranking_tie_breaks():
    prof = bec_bhattacharyya(2, 0.5)
    assert list(ranking(prof)) == [3, 2, 1, 0]
    flat = bec_bhattacharyya(3, 1.0)
    assert list(ranking(flat, "high")[:3]) == [7, 6, 5]
    assert list(ranking(flat, "low")[:3]) == [0, 1, 2]
    with pytest.raises(ValueError):
        ranking(flat, "middle")


@pytest.mark.parametrize("m", range(2, 10))
def test_high_snr_design_is_reed_muller(m):
    N = 1 << m
    for r in range(m):
        K = sum(math.comb(m, d) for d in range(r + 1))
        spec = DesignSpec(m=m, K=K, channel=biawgn(40.0, K / N), ga_mu_max=np.inf)
        d = construct_reliability(spec)
        assert d.as_set() == set(rm_information_set(m, r).tolist()), r


def test_saturated_ga_is_not_reed_muller_at_high_snr():
    # with phi^{-1} capped, 40 dB means collapse into a few tied values
    m, r = 7, 3
    K = 64
    d = construct_reliability(DesignSpec(m=m, K=K, channel=biawgn(40.0, 0.5)))
    assert d.as_set() != set(rm_information_set(m, r).tolist())
    assert np.max(d.profile.mean_llr[:-1]) <= 100.0 * 2 ** (m - 1)


def test_phi_inverse_is_log_domain_exact():
    x = np.array([1e3, 1e4, 1e5])
    assert np.all(phi(x[1:]) == 0.0)
    assert np.all(np.isfinite(log_phi(x)))
    from polarforge.reliability import _phi_inv_log

    np.testing.assert_allclose(_phi_inv_log(log_phi(x), np.inf), x, rtol=1e-12)


@pytest.mark.parametrize("m", range(1, 11))
def test_reliability_sets_are_decreasing(m):
    N = 1 << m
    sp = MonomialSpace(m)
    for K in range(1, N + 1, max(1, N // 16)):
        for ch in (bec(0.5), bec(0.05), biawgn(0.0, K / N), biawgn(4.0, K / N)):
            d = construct_reliability(DesignSpec(m=m, K=K, channel=ch))
            assert is_decreasing(d.indices, sp)[0], (m, K, ch)
