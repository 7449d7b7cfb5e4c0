"""Polar transform, pretransforms (CRC, PAC) and encoders."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

__all__ = [
    "CodeConfig",
    "polar_transform",
    "crc_compute",
    "crc_check",
    "crc_long_division",
    "pac_convolve",
    "encode",
    "encode_batch",
    "PAC_POLY",
    "CRC12_POLY",
]

# Generator masks omit the leading x^len term.
CRC12_POLY = 0xC06
PAC_POLY = (1, 0, 1, 1, 0, 1, 1)


def polar_transform(u) -> np.ndarray:
    """``u G_N`` over GF(2) on the last axis; works on batches.

    The transform is its own inverse.
    """
    x = np.array(u, dtype=np.uint8, copy=True)
    N = x.shape[-1]
    if N < 1 or N & (N - 1):
        raise ValueError(f"length must be a power of two, got {N}")
    lead = x.shape[:-1]
    h = N // 2
    while h >= 1:
        y = x.reshape(*lead, N // (2 * h), 2, h)
        y[..., 0, :] ^= y[..., 1, :]
        h //= 2
    return x


def crc_long_division(bits: Sequence[int], poly: int, length: int) -> list[int]:
    """Bit-serial remainder of ``bits * x^length`` modulo the generator.

    Reference implementation: one shift per input bit, MSB first.
    """
    gen = [1] + [(poly >> (length - 1 - k)) & 1 for k in range(length)]
    reg = [int(b) & 1 for b in bits] + [0] * length
    for k in range(len(bits)):
        if reg[k]:
            for j in range(length + 1):
                reg[k + j] ^= gen[j]
    return reg[len(bits):]


def crc_compute(payload, poly: int = CRC12_POLY, length: int = 12) -> np.ndarray:
    """CRC bits of ``payload`` (zero initial state, no reflection, no final XOR).

    Accepts bit vectors with any leading batch shape; returns uint8 bits of
    shape ``(..., length)``, most significant first.
    """
    bits = np.asarray(payload, dtype=np.uint8)
    lead = bits.shape[:-1]
    bits = bits.reshape(-1, bits.shape[-1])
    B, k = bits.shape
    top = 1 << (length - 1)
    mask = (1 << length) - 1
    reg = np.zeros(B, dtype=np.int64)
    # bit-serial, vectorised across the batch
    for j in range(k):
        fb = ((reg & top) != 0) ^ (bits[:, j] != 0)
        reg = (reg << 1) & mask
        reg = np.where(fb, reg ^ poly, reg)
    shifts = np.arange(length - 1, -1, -1)
    out = ((reg[:, None] >> shifts) & 1).astype(np.uint8)
    return out.reshape(*lead, length)


def crc_check(word, poly: int = CRC12_POLY, length: int = 12):
    """True where the trailing ``length`` bits are the CRC of the rest."""
    word = np.asarray(word, dtype=np.uint8)
    payload, tail = word[..., :-length], word[..., -length:]
    ok = np.all(crc_compute(payload, poly, length) == tail, axis=-1)
    return bool(ok) if np.ndim(ok) == 0 else ok


def pac_convolve(v, poly: Sequence[int] = PAC_POLY) -> np.ndarray:
    """``u_i = sum_t p_t v_{i-t}`` over GF(2) along the last axis."""
    v = np.asarray(v, dtype=np.uint8)
    u = v.copy() if poly[0] else np.zeros_like(v)
    for t, p in enumerate(poly[1:], start=1):
        if p:
            u[..., t:] ^= v[..., :-t]
    return u


@dataclass(frozen=True)
class CodeConfig:
    """An information set plus optional pretransform.

    ``pretransform="crc"`` places ``payload || crc`` on the information set
    in increasing index order, so the CRC occupies the last (most reliable)
    positions.  ``pretransform="pac"`` places ``v`` on the rate profile and
    convolves across all positions before the polar transform.
    """

    N: int
    info: tuple[int, ...]
    pretransform: Literal["none", "crc", "pac"] = "none"
    crc_poly: int = CRC12_POLY
    crc_len: int = 12
    pac_poly: tuple[int, ...] = PAC_POLY
    info_mask: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        N = int(self.N)
        if N < 2 or N & (N - 1):
            raise ValueError(f"N must be a power of two >= 2, got {N}")
        info = tuple(sorted({int(i) for i in self.info}))
        if not info or info[0] < 0 or info[-1] >= N:
            raise ValueError("information set must be a nonempty subset of range(N)")
        object.__setattr__(self, "info", info)
        if self.pretransform == "crc":
            if self.crc_len < 1 or self.crc_len >= len(info):
                raise ValueError(f"CRC length {self.crc_len} needs K > {self.crc_len}")
            if self.crc_poly >> self.crc_len:
                raise ValueError("CRC generator mask wider than the CRC length")
        elif self.pretransform == "pac":
            if not self.pac_poly or self.pac_poly[0] != 1:
                raise ValueError("PAC impulse response must start with 1")
            object.__setattr__(self, "pac_poly", tuple(int(p) & 1 for p in self.pac_poly))
        elif self.pretransform != "none":
            raise ValueError(f"unknown pretransform {self.pretransform!r}")
        mask = np.zeros(N, dtype=bool)
        mask[list(info)] = True
        mask.setflags(write=False)
        object.__setattr__(self, "info_mask", mask)

    @property
    def K(self) -> int:
        return len(self.info)

    @property
    def m(self) -> int:
        return self.N.bit_length() - 1

    @property
    def message_length(self) -> int:
        return self.K - self.crc_len if self.pretransform == "crc" else self.K

    @property
    def conv(self) -> tuple[int, ...]:
        return self.pac_poly if self.pretransform == "pac" else (1,)

    def message_to_v(self, messages) -> np.ndarray:
        """Rate-profiled input ``v`` (length ``N``) for one or many messages."""
        msg = np.asarray(messages, dtype=np.uint8)
        if msg.shape[-1] != self.message_length:
            raise ValueError(f"message length {msg.shape[-1]} != {self.message_length}")
        word = msg
        if self.pretransform == "crc":
            word = np.concatenate([msg, crc_compute(msg, self.crc_poly, self.crc_len)], axis=-1)
        v = np.zeros(msg.shape[:-1] + (self.N,), dtype=np.uint8)
        v[..., list(self.info)] = word
        return v

    def v_to_u(self, v) -> np.ndarray:
        if self.pretransform == "pac":
            return pac_convolve(v, self.pac_poly)
        return np.asarray(v, dtype=np.uint8)

    def v_to_message(self, v) -> np.ndarray:
        word = np.asarray(v)[..., list(self.info)]
        return word[..., : self.message_length]


def encode(message, config: CodeConfig) -> np.ndarray:
    msg = np.asarray(message, dtype=np.uint8)
    if msg.ndim != 1:
        raise ValueError("encode takes a single message; use encode_batch")
    return encode_batch(msg[None, :], config)[0]


def encode_batch(messages, config: CodeConfig) -> np.ndarray:
    v = config.message_to_v(messages)
    return polar_transform(config.v_to_u(v))
