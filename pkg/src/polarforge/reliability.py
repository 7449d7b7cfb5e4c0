"""Bit-channel reliability profiles for BEC and BPSK-AWGN.

Bit ``t`` of an index selects the plus (better) transform when set; bits are
consumed from most to least significant, so index ``N-1`` is the all-plus
channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.special import erfc

__all__ = [
    "ChannelModel",
    "ReliabilityProfile",
    "bec",
    "biawgn",
    "bec_bhattacharyya",
    "ga_awgn",
    "channel_bhattacharyya",
    "pairwise_error",
    "qfunc",
    "phi",
    "phi_inv",
    "log_phi",
    "ranking",
    "GA_MU_MAX",
]

# phi^{-1} saturates here; selected sets in published tables depend on it.
GA_MU_MAX = 100.0


@dataclass(frozen=True)
class ChannelModel:
    """Physical channel: ``kind="bec"`` with ``erasure`` or ``kind="biawgn"``
    with design ``ebn0_db`` and code ``rate``."""

    kind: Literal["bec", "biawgn"]
    erasure: float | None = None
    ebn0_db: float | None = None
    rate: float | None = None

    def __post_init__(self):
        if self.kind == "bec":
            if self.erasure is None or not 0.0 <= self.erasure <= 1.0:
                raise ValueError(f"BEC erasure probability must be in [0, 1], got {self.erasure}")
        elif self.kind == "biawgn":
            if self.ebn0_db is None or not math.isfinite(self.ebn0_db):
                raise ValueError("BiAWGN needs a finite Eb/N0 in dB")
            if self.rate is None or not 0.0 < self.rate <= 1.0:
                raise ValueError(f"code rate must be in (0, 1], got {self.rate}")
        else:
            raise ValueError(f"unknown channel kind {self.kind!r}")

    @property
    def sigma2(self) -> float:
        """Noise variance per BPSK symbol, ``1 / (2 R Eb/N0)``."""
        if self.kind != "biawgn":
            raise ValueError("noise variance is only defined for BiAWGN")
        return 1.0 / (2.0 * self.rate * 10.0 ** (self.ebn0_db / 10.0))

    def with_rate(self, rate: float) -> "ChannelModel":
        if self.kind != "biawgn":
            return self
        return ChannelModel("biawgn", ebn0_db=self.ebn0_db, rate=rate)


def bec(erasure: float) -> ChannelModel:
    return ChannelModel("bec", erasure=float(erasure))


def biawgn(ebn0_db: float, rate: float) -> ChannelModel:
    return ChannelModel("biawgn", ebn0_db=float(ebn0_db), rate=float(rate))


@dataclass(frozen=True)
class ReliabilityProfile:
    """Per-index channel quality.  Smaller ``values`` means more reliable.

    ``log_values`` (BEC only) keeps exact ordering where ``values`` underflow;
    ``rank_key`` (BEC only) is ``log Z - log(1 - Z)``, exact near both 0 and 1;
    ``mean_llr`` is filled by the Gaussian approximation.
    """

    kind: Literal["bhattacharyya", "sc_error_prob"]
    values: np.ndarray
    channel: ChannelModel
    mean_llr: np.ndarray | None = field(default=None, repr=False)
    log_values: np.ndarray | None = field(default=None, repr=False)
    rank_key: np.ndarray | None = field(default=None, repr=False)

    @property
    def N(self) -> int:
        return len(self.values)

    @property
    def m(self) -> int:
        return self.N.bit_length() - 1

    @property
    def default_tie_break(self) -> str:
        # GA: stable low-index order of the reference construction tool.
        # BEC: larger index first, which keeps degenerate ties down-closed.
        return "low" if self.kind == "sc_error_prob" else "high"


def _polarize(root, m, minus, plus):
    vals = np.array([root], dtype=float)
    for _ in range(m):
        nxt = np.empty(2 * len(vals))
        nxt[0::2] = minus(vals)
        nxt[1::2] = plus(vals)
        vals = nxt
    return vals


def bec_bhattacharyya(m: int, erasure: float) -> ReliabilityProfile:
    """Exact BEC erasure probabilities ``Z^- = 2Z - Z^2``, ``Z^+ = Z^2``.

    Computed in the log domain so that ranking survives underflow at small
    erasure probabilities.
    """
    channel = bec(erasure)
    N = 1 << m
    if erasure in (0.0, 1.0):
        logz = np.full(N, -np.inf if erasure == 0.0 else 0.0)
        return ReliabilityProfile(
            "bhattacharyya", np.exp(logz), channel, log_values=logz, rank_key=logz.copy()
        )
    # track log Z and log(1 - Z) side by side:
    # minus: 1 - Z' = (1 - Z)^2,  Z' = Z (1 + (1 - Z));  plus: Z' = Z^2,  1 - Z' = (1 - Z)(1 + Z)
    lz = np.array([math.log(erasure)])
    lc = np.array([math.log1p(-erasure)])
    for _ in range(m):
        nz = np.empty(2 * len(lz))
        nc = np.empty(2 * len(lz))
        nz[0::2] = lz + np.log1p(np.exp(lc))
        nc[0::2] = 2.0 * lc
        nz[1::2] = 2.0 * lz
        nc[1::2] = lc + np.log1p(np.exp(lz))
        lz, lc = nz, nc
    logz = np.minimum(lz, 0.0)
    values = np.exp(logz)
    return ReliabilityProfile("bhattacharyya", values, channel, log_values=logz, rank_key=lz - lc)


def qfunc(x):
    """Gaussian tail ``Q(x) = erfc(x / sqrt 2) / 2``."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


# below this mean the fitted curve exceeds 1; bridge linearly to phi(0) = 1
PHI_BRIDGE = 0.05
_FIT_A, _FIT_B, _FIT_C = 0.4527, 0.86, 0.0218


def _log_phi_fit(x):
    return -_FIT_A * np.power(x, _FIT_B) + _FIT_C


_EDGE = math.exp(float(_log_phi_fit(PHI_BRIDGE)))


def log_phi(x):
    """Natural log of :func:`phi`, finite where ``phi`` itself underflows."""
    x = np.asarray(x, dtype=float)
    bridge = 1.0 - (1.0 - _EDGE) * np.clip(x, 0.0, PHI_BRIDGE) / PHI_BRIDGE
    return np.where(x >= PHI_BRIDGE, _log_phi_fit(np.maximum(x, PHI_BRIDGE)), np.log(bridge))


def phi(x):
    """Chung's approximation of ``1 - E[tanh(L/2)]`` for ``L ~ N(x, 2x)``.

    The fit is used on ``[PHI_BRIDGE, inf)``; on ``[0, PHI_BRIDGE]`` a linear
    bridge to 1 keeps the map strictly decreasing and invertible.
    """
    return np.exp(log_phi(x))


def _phi_inv_log(ly, mu_max):
    ly = np.minimum(np.asarray(ly, dtype=float), 0.0)
    fit = np.power(np.maximum(_FIT_C - ly, 0.0) / _FIT_A, 1.0 / _FIT_B)
    bridge = (1.0 - np.exp(ly)) * PHI_BRIDGE / (1.0 - _EDGE)
    out = np.where(ly < math.log(_EDGE), fit, bridge)
    return np.minimum(out, mu_max)


def phi_inv(y, mu_max: float = GA_MU_MAX):
    """Inverse of :func:`phi`, saturating at ``mu_max``.

    ``y >= 1`` maps to 0 and ``y <= 0`` to ``mu_max``.  Both pieces of
    :func:`phi` invert in closed form.
    """
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore"):
        return _phi_inv_log(np.log(np.maximum(y, 0.0)), mu_max)


def _check_node(v, mu_max):
    # 1 - (1 - phi)^2 = phi (2 - phi), kept in the log domain
    lp = log_phi(v)
    return _phi_inv_log(lp + np.log(2.0 - np.exp(lp)), mu_max)


def ga_awgn(m: int, ebn0_db: float, rate: float, mu_max: float = GA_MU_MAX) -> ReliabilityProfile:
    """Gaussian-approximation profile for BPSK-AWGN.

    The root mean LLR is ``2/sigma^2 = 4 R 10^(EbN0/10)``; check nodes use
    ``phi^{-1}(1 - (1 - phi(mu))^2)`` and variable nodes double the mean.
    Returned ``values`` are ``P_i = Q(sqrt(mu_i / 2))``.  Pass
    ``mu_max=np.inf`` to switch off the saturation of ``phi^{-1}``.
    """
    channel = biawgn(ebn0_db, rate)
    mu = _polarize(
        2.0 / channel.sigma2,
        m,
        lambda v: _check_node(v, mu_max),
        lambda v: 2.0 * v,
    )
    if not np.all(np.isfinite(mu)):
        bad = int(np.flatnonzero(~np.isfinite(mu))[0])
        raise FloatingPointError(f"non-finite GA mean at index {bad}")
    pe = qfunc(np.sqrt(mu / 2.0))
    return ReliabilityProfile("sc_error_prob", pe, channel, mean_llr=mu)


def ranking(profile: ReliabilityProfile, tie_break: str | None = None) -> np.ndarray:
    """Indices from most to least reliable.

    ``tie_break="low"`` keeps the smaller index first among equal values,
    ``"high"`` the larger one.
    """
    tie_break = tie_break or profile.default_tie_break
    if profile.rank_key is not None:
        key = profile.rank_key
    elif profile.mean_llr is not None:
        # larger mean LLR is more reliable and does not underflow like P_i
        key = -profile.mean_llr
    else:
        key = profile.values
    if tie_break == "low":
        return np.argsort(key, kind="stable")
    if tie_break == "high":
        n = len(key)
        return (n - 1 - np.argsort(key[::-1], kind="stable")).astype(np.int64)
    raise ValueError(f"tie_break must be 'low' or 'high', got {tie_break!r}")


def channel_bhattacharyya(model: ChannelModel) -> float:
    """Physical-channel ``Z(W)``: ``eps`` on the BEC, ``exp(-R Eb/N0)`` on BiAWGN."""
    if model.kind == "bec":
        return float(model.erasure)
    return math.exp(-model.rate * 10.0 ** (model.ebn0_db / 10.0))


def pairwise_error(w: int, model: ChannelModel, mode: str = "bhattacharyya") -> float:
    """Probability of confusing two codewords at Hamming distance ``w``."""
    if w < 1:
        raise ValueError(f"weight must be >= 1, got {w}")
    if mode == "bhattacharyya":
        return channel_bhattacharyya(model) ** w
    if mode == "qfunc":
        if model.kind != "biawgn":
            raise ValueError("qfunc pairwise error is only defined for BiAWGN")
        return float(qfunc(math.sqrt(2.0 * w * model.rate * 10.0 ** (model.ebn0_db / 10.0))))
    raise ValueError(f"unknown pairwise-error mode {mode!r}")
