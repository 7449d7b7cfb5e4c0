import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarforge.codec import (
    CRC12_POLY,
    PAC_POLY,
    CodeConfig,
    crc_check,
    crc_compute,
    crc_long_division,
    encode,
    encode_batch,
    pac_convolve,
    polar_transform,
)
from polarforge.construction import DesignSpec, construct_reliability
from polarforge.monomials import generator_matrix
from polarforge.reliability import biawgn
from polarforge.spectrum import wmin_of


def design(m, K, db=3.0):
    return construct_reliability(DesignSpec(m=m, K=K, channel=biawgn(db, K / (1 << m))))


def test_polar_transform_examples():
    assert not polar_transform(np.zeros(8)).any()
    np.testing.assert_array_equal(polar_transform([1, 1]), [0, 1])
    with pytest.raises(ValueError):
        polar_transform(np.zeros(6))


@pytest.mark.parametrize("m", range(1, 8))
def test_polar_transform_matches_generator(m):
    rng = np.random.default_rng(m)
    u = rng.integers(0, 2, (20, 1 << m), dtype=np.uint8)
    G = generator_matrix(m).astype(np.int64)
    np.testing.assert_array_equal(polar_transform(u), (u.astype(np.int64) @ G) % 2)
    np.testing.assert_array_equal(polar_transform(polar_transform(u)), u)


def test_crc_examples():
    assert not crc_compute(np.zeros(40, dtype=np.uint8)).any()
    impulse = [1] + [0] * 11
    np.testing.assert_array_equal(crc_compute(impulse), crc_long_division(impulse, CRC12_POLY, 12))


@settings(max_examples=100, deadline=None)
@given(bits=st.lists(st.integers(0, 1), min_size=1, max_size=80))
def test_crc_matches_long_division(bits):
    np.testing.assert_array_equal(crc_compute(bits), crc_long_division(bits, CRC12_POLY, 12))
    word = np.concatenate([np.array(bits, dtype=np.uint8), crc_compute(bits)])
    assert crc_check(word)
    word[0] ^= 1
    assert not crc_check(word)


def test_crc_batch_shape():
    rng = np.random.default_rng(0)
    x = rng.integers(0, 2, (3, 4, 30), dtype=np.uint8)
    out = crc_compute(x)
    assert out.shape == (3, 4, 12)
    np.testing.assert_array_equal(out[1, 2], crc_compute(x[1, 2]))
    assert crc_check(np.concatenate([x, out], axis=-1)).all()


def test_pac_impulse():
    d = design(7, 64)
    cfg = CodeConfig(128, tuple(d.indices), "pac")
    v = np.zeros(128, dtype=np.uint8)
    i0 = int(d.indices[0])
    v[i0] = 1
    u = cfg.v_to_u(v)
    np.testing.assert_array_equal(u[i0:i0 + 7], PAC_POLY)
    assert not u[:i0].any() and not u[i0 + 7:].any()


def test_pac_convolve_is_linear():
    rng = np.random.default_rng(1)
    a, b = rng.integers(0, 2, (2, 64), dtype=np.uint8)
    np.testing.assert_array_equal(pac_convolve(a ^ b), pac_convolve(a) ^ pac_convolve(b))


def test_config_validation():
    with pytest.raises(ValueError):
        CodeConfig(12, (1, 2))
    with pytest.raises(ValueError):
        CodeConfig(16, ())
    with pytest.raises(ValueError):
        CodeConfig(16, (3, 16))
    with pytest.raises(ValueError):
        CodeConfig(16, tuple(range(8)), "crc")
    with pytest.raises(ValueError):
        CodeConfig(16, (1, 2), "pac", pac_poly=(0, 1))
    with pytest.raises(ValueError):
        CodeConfig(16, (1, 2), "turbo")
    cfg = CodeConfig(64, tuple(range(32, 64)), "crc")
    assert cfg.K == 32 and cfg.message_length == 20
    with pytest.raises(ValueError):
        encode(np.zeros(32, dtype=np.uint8), cfg)


@pytest.mark.parametrize("pre", ["none", "crc", "pac"])
def test_zero_message_gives_zero_codeword(pre):
    d = design(7, 64)
    cfg = CodeConfig(128, tuple(d.indices), pre)
    assert not encode(np.zeros(cfg.message_length, dtype=np.uint8), cfg).any()


def test_codeword_weights_respect_wmin():
    d = design(8, 128, 3.0)
    cfg = CodeConfig(256, tuple(d.indices))
    rng = np.random.default_rng(7)
    msgs = rng.integers(0, 2, (10_000, 128), dtype=np.uint8)
    w = encode_batch(msgs, cfg).sum(axis=1)
    nonzero = msgs.any(axis=1)
    assert w[nonzero].min() >= wmin_of(d.indices, d.space)


def test_crc_sits_on_the_tail_of_the_information_set():
    d = design(6, 32)
    cfg = CodeConfig(64, tuple(d.indices), "crc", crc_len=8, crc_poly=0x07)
    msg = np.random.default_rng(2).integers(0, 2, 24, dtype=np.uint8)
    v = cfg.message_to_v(msg)
    tail = v[list(d.indices[-8:])]
    np.testing.assert_array_equal(tail, crc_compute(msg, 0x07, 8))
    np.testing.assert_array_equal(cfg.v_to_message(v), msg)
