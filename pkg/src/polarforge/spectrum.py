"""Closed-form minimum distance, minimum-weight multiplicity and bounds.

For a decreasing monomial set with maximum degree ``r`` the minimum distance
is ``2^(m-r)`` and every minimum-weight codeword lies in the lower-triangular
affine orbit of some degree-``r`` monomial ``f``; that orbit has
``2^(r + |lambda_f|)`` elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .monomials import Monomial, MonomialSpace, is_decreasing, monomial_of
from .reliability import ChannelModel, ReliabilityProfile, channel_bhattacharyya

__all__ = [
    "NotDecreasingError",
    "WeightReport",
    "lambda_size",
    "index_lambda",
    "min_weight_contribution",
    "max_degree",
    "wmin_of",
    "awmin_of",
    "bitwise_wmin",
    "ub_min_weight",
    "sc_sum_bound",
    "ml_negligibility_ratio",
    "weight_report",
]


class NotDecreasingError(ValueError):
    """The closed forms are only valid for decreasing sets."""


def lambda_size(f: Monomial) -> int:
    """``|lambda_f|``: over the variables of ``f``, count smaller absent variables.

    Equals ``sum(vars) - s(s-1)/2`` for ``s = deg f``.
    """
    if f.degree == 0:
        raise ValueError("the constant monomial has no orbit parameterisation")
    v = f.vars
    s = len(v)
    return sum(v) - s * (s - 1) // 2


def index_lambda(i: int, m: int) -> int:
    """``|lambda|`` of the monomial at index ``i``; 0 for the constant."""
    s = m - int(i).bit_count()
    if s == 0:
        return 0
    total = sum(t for t in range(m) if not (i >> t) & 1)
    return total - s * (s - 1) // 2


def min_weight_contribution(f: Monomial, r: int) -> int:
    if f.degree != r:
        return 0
    return 1 << (r + (lambda_size(f) if r else 0))


def _indices(S: Iterable[int]) -> list[int]:
    return sorted({int(i) for i in S})


def _require_decreasing(S, space, strict):
    if strict:
        ok, violations = is_decreasing(S, space)
        if not ok:
            g, f = violations[0]
            raise NotDecreasingError(
                f"set is not decreasing: {monomial_of(g, space)} is missing below "
                f"{monomial_of(f, space)} ({len(violations)} missing in total)"
            )


def max_degree(S: Iterable[int], space: MonomialSpace) -> int:
    S = _indices(S)
    if not S:
        raise ValueError("empty information set")
    return max(space.m - i.bit_count() for i in S)


def wmin_of(S: Iterable[int], space: MonomialSpace, strict: bool = True) -> int:
    """``2^(m - r)`` with ``r`` the maximum degree in ``S``.

    With ``strict=False`` the formula is evaluated on any set (a closed-form
    figure, not a proven distance).
    """
    S = _indices(S)
    _require_decreasing(S, space, strict)
    return 1 << (space.m - max_degree(S, space))


def awmin_of(S: Iterable[int], space: MonomialSpace, strict: bool = True) -> tuple[int, dict[int, int]]:
    """Exact ``A_wmin`` and the per-index contributions of degree-``r`` indices."""
    S = _indices(S)
    _require_decreasing(S, space, strict)
    r = max_degree(S, space)
    m = space.m
    contrib = {}
    for i in S:
        if m - i.bit_count() == r:
            contrib[i] = 1 << (r + index_lambda(i, m))
    return sum(contrib.values()), contrib


def bitwise_wmin(i: int, S: Iterable[int], space: MonomialSpace) -> int:
    """Minimum weight over codewords whose message bit ``i`` is set."""
    S = set(_indices(S))
    if int(i) not in S:
        raise ValueError(f"index {i} is not in the information set")
    return 1 << int(i).bit_count()


def ub_min_weight(S: Iterable[int], space: MonomialSpace, model: ChannelModel, strict: bool = True) -> float:
    """Minimum-weight union-bound term ``A_wmin * Z(W)^wmin``."""
    S = _indices(S)
    a, _ = awmin_of(S, space, strict)
    w = wmin_of(S, space, strict=False)
    return a * channel_bhattacharyya(model) ** w


def sc_sum_bound(S: Iterable[int], profile: ReliabilityProfile) -> float:
    idx = np.asarray(_indices(S), dtype=np.int64)
    if idx.size == 0:
        return 0.0
    return float(math.fsum(profile.values[idx]))


def ml_negligibility_ratio(S: Iterable[int], space: MonomialSpace, model: ChannelModel) -> dict[int, float]:
    """``Z^(2^(m-d)) / Z^(2^(m-r))`` for every degree ``d <= r`` present in ``S``.

    The ratio compares a degree-``d`` index against a maximum-degree one in
    the minimum-weight surrogate of the ML union bound.
    """
    S = _indices(S)
    r = max_degree(S, space)
    z = channel_bhattacharyya(model)
    degs = sorted({space.m - i.bit_count() for i in S})
    wr = 1 << (space.m - r)
    out = {}
    for d in degs:
        wd = 1 << (space.m - d)
        out[d] = 1.0 if d == r else z ** (wd - wr)
    return out


@dataclass
class WeightReport:
    r: int
    wmin: int
    awmin: int
    per_index_contrib: dict[int, int] = field(repr=False)
    ub_wmin: float | None
    sc_sum: float | None
    decreasing: bool = True


def weight_report(
    S: Iterable[int],
    space: MonomialSpace,
    model: ChannelModel | None = None,
    profile: ReliabilityProfile | None = None,
) -> WeightReport:
    """All closed-form figures for ``S``.

    Non-decreasing sets are evaluated too, with ``decreasing=False`` flagged
    on the report.
    """
    S = _indices(S)
    ok, _ = is_decreasing(S, space)
    a, contrib = awmin_of(S, space, strict=False)
    r = max_degree(S, space)
    w = 1 << (space.m - r)
    ub = a * channel_bhattacharyya(model) ** w if model is not None else None
    sc = sc_sum_bound(S, profile) if profile is not None else None
    return WeightReport(r, w, a, contrib, ub, sc, decreasing=ok)
