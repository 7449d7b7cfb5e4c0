"""Information-set construction: reliability, mixed reliability-weight, RM.

The mixed cost of index ``i`` at candidate maximum degree ``r`` is

    J(i) = Z_i + alpha * C(i) * Z(W)^(2^(m-r)),

with ``C(i) = 2^(r + |lambda_i|)`` for degree-``r`` indices and 0 otherwise.
A mixed design minimises the sum of ``J`` over decreasing sets of size ``K``
whose degrees do not exceed ``r``.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

import numpy as np

from . import reliability as rel
from .monomials import MonomialSpace, index_degrees, is_decreasing, lower_covers, upper_covers
from .reliability import ChannelModel, ReliabilityProfile, channel_bhattacharyya
from .spectrum import index_lambda, sc_sum_bound, weight_report

log = logging.getLogger(__name__)

__all__ = [
    "DesignSpec",
    "InformationSet",
    "InfeasibleDesignError",
    "reliability_profile",
    "construct_reliability",
    "construct_mixed",
    "construct",
    "mixed_cost",
    "mixed_costs",
    "contributions",
    "rm_rstar",
    "rm_information_set",
    "degree_cap_feasible",
    "staircase_sweep",
    "StaircasePoint",
    "compare_sets",
    "SetComparison",
]


class InfeasibleDesignError(ValueError):
    pass


@dataclass(frozen=True)
class DesignSpec:
    """Parameters of one construction.

    ``degree_cap`` is ``"auto"`` or an explicit maximum degree.  ``method``
    selects how the mixed arg-min is searched (see :func:`construct_mixed`).
    ``ga_mu_max`` is the saturation of the Gaussian approximation's inverse
    map; ``np.inf`` disables it.
    """

    m: int
    K: int
    channel: ChannelModel
    alpha: float = 100.0
    degree_cap: int | Literal["auto"] = "auto"
    strategy: Literal["reliability", "mixed"] = "reliability"
    method: Literal["auto", "ranked", "greedy"] = "auto"
    tie_break: Literal["low", "high"] | None = None
    ga_mu_max: float = rel.GA_MU_MAX

    def __post_init__(self):
        N = 1 << self.m
        if not 1 <= self.K <= N:
            raise InfeasibleDesignError(f"K must be in [1, {N}], got {self.K}")
        if self.alpha < 0:
            raise InfeasibleDesignError(f"alpha must be nonnegative, got {self.alpha}")
        if self.degree_cap != "auto":
            if not degree_cap_feasible(self.m, self.K, int(self.degree_cap)):
                raise InfeasibleDesignError(
                    f"no decreasing set of size {self.K} has degrees <= {self.degree_cap} at m={self.m}"
                )
        if self.strategy not in ("reliability", "mixed"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.method not in ("auto", "ranked", "greedy"):
            raise ValueError(f"unknown mixed method {self.method!r}")

    @property
    def N(self) -> int:
        return 1 << self.m

    @property
    def space(self) -> MonomialSpace:
        return MonomialSpace(self.m)

    def snapshot(self) -> dict:
        ch = self.channel
        return {
            "m": self.m,
            "N": self.N,
            "K": self.K,
            "channel": {"kind": ch.kind, "erasure": ch.erasure, "ebn0_db": ch.ebn0_db, "rate": ch.rate},
            "alpha": self.alpha,
            "degree_cap": self.degree_cap,
            "strategy": self.strategy,
            "method": self.method,
            "tie_break": self.tie_break,
            # JSON has no infinity; None means the saturation is switched off
            "ga_mu_max": self.ga_mu_max if math.isfinite(self.ga_mu_max) else None,
        }


@dataclass
class InformationSet:
    """A size-``K`` index set with the per-index cost terms used to build it.

    ``z``, ``contrib``, ``distance_penalty`` and ``cost`` are length-``N``
    arrays (``Z_i``, ``C_K(i)``, ``D_K(i)``, ``J_K(i)``); ``cost`` equals
    ``z + alpha * distance_penalty`` elementwise.
    """

    indices: np.ndarray
    m: int
    strategy: str
    spec: DesignSpec | None
    profile: ReliabilityProfile = field(repr=False)
    r: int = 0
    alpha: float = 0.0
    z: np.ndarray = field(default=None, repr=False)
    contrib: np.ndarray = field(default=None, repr=False)
    distance_penalty: np.ndarray = field(default=None, repr=False)
    cost: np.ndarray = field(default=None, repr=False)
    objective: float = 0.0
    decreasing: bool = True
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.indices = np.unique(np.asarray(self.indices, dtype=np.int64))

    @property
    def K(self) -> int:
        return int(self.indices.size)

    @property
    def N(self) -> int:
        return 1 << self.m

    @property
    def space(self) -> MonomialSpace:
        return MonomialSpace(self.m)

    def __contains__(self, i) -> bool:
        return bool(np.any(self.indices == i))

    def as_set(self) -> set[int]:
        return {int(i) for i in self.indices}

    def mask(self) -> np.ndarray:
        out = np.zeros(self.N, dtype=bool)
        out[self.indices] = True
        return out

    def report(self, model: ChannelModel | None = None):
        """Weight report at the design channel (or ``model``)."""
        model = model or self.profile.channel
        return weight_report(self.indices, self.space, model, self.profile)


def degree_cap_feasible(m: int, K: int, r: int) -> bool:
    return 0 <= r <= m and sum(math.comb(m, t) for t in range(r + 1)) >= K


def reliability_profile(
    m: int, channel: ChannelModel, ga_mu_max: float = rel.GA_MU_MAX
) -> ReliabilityProfile:
    """BEC -> exact Bhattacharyya recursion, BiAWGN -> Gaussian approximation."""
    if channel.kind == "bec":
        return rel.bec_bhattacharyya(m, channel.erasure)
    return rel.ga_awgn(m, channel.ebn0_db, channel.rate, mu_max=ga_mu_max)


def contributions(m: int, r: int) -> np.ndarray:
    """``C_K(i)`` for every index at maximum degree ``r`` (float array)."""
    N = 1 << m
    degs = index_degrees(m)
    out = np.zeros(N)
    for i in np.flatnonzero(degs == r):
        out[i] = float(1 << (r + index_lambda(int(i), m)))
    return out


def mixed_costs(profile: ReliabilityProfile, r: int, alpha: float, channel: ChannelModel | None = None):
    """Return ``(contrib, distance_penalty, cost)`` arrays at max degree ``r``."""
    channel = channel or profile.channel
    m = profile.m
    contrib = contributions(m, r)
    penalty = contrib * channel_bhattacharyya(channel) ** (1 << (m - r))
    return contrib, penalty, profile.values + alpha * penalty


def mixed_cost(i: int, profile: ReliabilityProfile, r: int, alpha: float) -> float:
    """Single-index mixed cost ``Z_i + alpha * D_K(i)``."""
    m = profile.m
    zi = float(profile.values[i])
    if m - int(i).bit_count() != r:
        return zi
    c = 1 << (r + index_lambda(int(i), m))
    return zi + alpha * c * channel_bhattacharyya(profile.channel) ** (1 << (m - r))


def construct_reliability(
    spec: DesignSpec,
    profile: ReliabilityProfile | None = None,
) -> InformationSet:
    """The ``K`` most reliable indices."""
    profile = profile or reliability_profile(spec.m, spec.channel, spec.ga_mu_max)
    order = rel.ranking(profile, spec.tie_break)
    chosen = np.sort(order[: spec.K])
    space = spec.space
    ok, _ = is_decreasing(chosen.tolist(), space)
    r = int(index_degrees(spec.m)[chosen].max())
    contrib, penalty, cost = mixed_costs(profile, r, 0.0)
    out = InformationSet(
        chosen, spec.m, "reliability", spec, profile, r=r, alpha=0.0,
        z=profile.values, contrib=contrib, distance_penalty=penalty, cost=cost,
        objective=sc_sum_bound(chosen, profile), decreasing=ok,
    )
    if not ok:
        out.notes.append("reliability order is not consistent with the monomial order")
    return out


def _ranked(cost: np.ndarray, degs: np.ndarray, cap: int, K: int, tie_break: str) -> np.ndarray:
    cand = np.flatnonzero(degs <= cap)
    c = cost[cand]
    if tie_break == "low":
        order = np.argsort(c, kind="stable")
    else:
        order = len(c) - 1 - np.argsort(c[::-1], kind="stable")
    return np.sort(cand[order[:K]])


def _greedy(cost: np.ndarray, degs: np.ndarray, m: int, cap: int, K: int, tie_break: str) -> np.ndarray:
    """Grow a decreasing set from the constant, always adding the cheapest
    admissible index of degree ``<= cap``."""
    N = 1 << m
    sign = -1 if tie_break == "high" else 1
    missing = np.array([len(lower_covers(i, m)) for i in range(N)])
    heap = [(float(cost[N - 1]), sign * (N - 1), N - 1)]
    chosen = []
    while len(chosen) < K:
        if not heap:
            raise AssertionError("frontier exhausted before reaching K (cap should be feasible)")
        _, _, i = heapq.heappop(heap)
        chosen.append(i)
        for s in upper_covers(i, m):
            missing[s] -= 1
            if missing[s] == 0 and degs[s] <= cap:
                heapq.heappush(heap, (float(cost[s]), sign * s, s))
    return np.sort(np.array(chosen, dtype=np.int64))


def _mixed_at_cap(spec, profile, cap, reference_decreasing):
    degs = index_degrees(spec.m)
    tie = spec.tie_break or profile.default_tie_break
    contrib, penalty, cost = mixed_costs(profile, cap, spec.alpha)
    space = spec.space
    notes = []
    method = spec.method
    chosen = None
    if method in ("auto", "ranked"):
        chosen = _ranked(cost, degs, cap, spec.K, tie)
        ok, _ = is_decreasing(chosen.tolist(), space)
        if method == "auto" and not ok:
            if reference_decreasing:
                chosen = None
            else:
                notes.append(
                    "profile is not order-consistent (reliability design is not decreasing); "
                    "kept the ranked arg-min"
                )
    if chosen is None:
        chosen = _greedy(cost, degs, spec.m, cap, spec.K, tie)
        ok = True
        notes.append("greedy frontier search")
    # score with the degree the set actually reaches, which can sit below the cap
    r = int(degs[chosen].max())
    if r != cap:
        contrib, penalty, cost = mixed_costs(profile, r, spec.alpha)
    objective = float(math.fsum(cost[chosen]))
    return InformationSet(
        chosen, spec.m, "mixed", spec, profile, r=r, alpha=spec.alpha,
        z=profile.values, contrib=contrib, distance_penalty=penalty, cost=cost,
        objective=objective, decreasing=ok, notes=notes,
    )


def construct_mixed(
    spec: DesignSpec,
    profile: ReliabilityProfile | None = None,
    reference: InformationSet | None = None,
) -> InformationSet:
    """K-dependent mixed design.

    ``method="ranked"`` takes the ``K`` cheapest indices of degree at most the
    cap.  That is the exact minimiser whenever the result is decreasing.
    ``method="greedy"`` grows a decreasing set through the admissible
    frontier.  ``method="auto"`` uses the ranked set when it is decreasing
    and the greedy search otherwise; when the reliability design of the same
    profile is itself not decreasing the ranked set is kept and flagged.

    With ``degree_cap="auto"`` the caps ``r_rel`` and ``r_rel - 1`` are both
    tried and the one with the smaller objective wins.
    """
    profile = profile or reliability_profile(spec.m, spec.channel, spec.ga_mu_max)
    if reference is None:
        reference = construct_reliability(spec, profile)
    if spec.degree_cap == "auto":
        caps = [reference.r]
        if reference.r >= 1 and degree_cap_feasible(spec.m, spec.K, reference.r - 1):
            caps.append(reference.r - 1)
    else:
        caps = [int(spec.degree_cap)]
    best = None
    for cap in caps:
        cand = _mixed_at_cap(spec, profile, cap, reference.decreasing)
        log.debug("cap %d: objective %.6g", cap, cand.objective)
        if best is None or cand.objective < best.objective:
            best = cand
    return best


def construct(spec: DesignSpec, profile: ReliabilityProfile | None = None) -> InformationSet:
    if spec.strategy == "reliability":
        return construct_reliability(spec, profile)
    return construct_mixed(spec, profile)


def rm_rstar(m: int, K: int) -> int:
    """Smallest ``r`` with ``sum_{t<=r} C(m, t) >= K``."""
    if not 1 <= K <= (1 << m):
        raise ValueError(f"K must be in [1, {1 << m}], got {K}")
    total = 0
    for r in range(m + 1):
        total += math.comb(m, r)
        if total >= K:
            return r
    raise AssertionError("unreachable")


def rm_information_set(m: int, r: int) -> np.ndarray:
    """All indices of degree ``<= r`` (the Reed-Muller code RM(r, m))."""
    return np.flatnonzero(index_degrees(m) <= r)


@dataclass
class StaircasePoint:
    rho: float
    indices: np.ndarray = field(repr=False)
    wmin: int
    row_weight_hist: dict[int, int]
    jump: bool


def staircase_sweep(
    m: int,
    K: int,
    family: Literal["bec", "biawgn"],
    grid: Sequence[float],
    tie_break: str | None = None,
) -> list[StaircasePoint]:
    """Minimum selected row weight of the reliability design along a grid.

    For ``family="bec"`` a grid value ``rho`` means erasure ``exp(-rho)``; for
    ``"biawgn"`` it is the design Eb/N0 in dB at rate ``K/N``.
    """
    grid = [float(g) for g in grid]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be sorted ascending")
    N = 1 << m
    row_weight = 1 << np.bitwise_count(np.arange(N, dtype=np.uint64)).astype(np.int64)
    out = []
    prev = None
    for rho in grid:
        if family == "bec":
            channel = rel.bec(math.exp(-rho))
        elif family == "biawgn":
            channel = rel.biawgn(rho, K / N)
        else:
            raise ValueError(f"unknown channel family {family!r}")
        profile = reliability_profile(m, channel)
        chosen = np.sort(rel.ranking(profile, tie_break)[:K])
        d = row_weight[chosen]
        hist = {int(w): int(c) for w, c in zip(*np.unique(d, return_counts=True))}
        wmin = int(d.min())
        out.append(StaircasePoint(rho, chosen, wmin, hist, prev is not None and wmin != prev))
        prev = wmin
    return out


@dataclass
class SetComparison:
    symmetric_difference: int
    only_in_a: list[int]
    only_in_b: list[int]
    sc_sum_a: float
    sc_sum_b: float
    wmin_a: int
    wmin_b: int
    awmin_a: int
    awmin_b: int
    ub_a: float
    ub_b: float

    @property
    def delta_sc_sum(self) -> float:
        return self.sc_sum_b - self.sc_sum_a

    @property
    def delta_wmin(self) -> int:
        return self.wmin_b - self.wmin_a

    @property
    def delta_awmin(self) -> int:
        return self.awmin_b - self.awmin_a

    @property
    def delta_ub(self) -> float:
        return self.ub_b - self.ub_a


def compare_sets(
    a: InformationSet,
    b: InformationSet,
    model: ChannelModel | None = None,
    profile: ReliabilityProfile | None = None,
) -> SetComparison:
    """Perturbation figures of ``b`` relative to ``a``."""
    if a.m != b.m or a.K != b.K:
        raise ValueError(f"cannot compare (N={a.N}, K={a.K}) with (N={b.N}, K={b.K})")
    model = model or a.profile.channel
    profile = profile or a.profile
    ra = weight_report(a.indices, a.space, model, profile)
    rb = weight_report(b.indices, b.space, model, profile)
    sa, sb = a.as_set(), b.as_set()
    return SetComparison(
        len(sa ^ sb), sorted(sa - sb), sorted(sb - sa),
        ra.sc_sum, rb.sc_sum, ra.wmin, rb.wmin, ra.awmin, rb.awmin, ra.ub_wmin, rb.ub_wmin,
    )
