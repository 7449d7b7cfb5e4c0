"""Brute-force ground truth for small monomial codes.

Nothing here uses the closed forms in :mod:`polarforge.spectrum`; the suite in
:func:`run_oracle_suite` compares the two.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

import numpy as np

from .monomials import Monomial, MonomialSpace, generator_matrix, lower_covers, monomial_of
from .spectrum import awmin_of, bitwise_wmin, index_lambda, wmin_of

__all__ = [
    "BudgetExceededError",
    "EnumerationBudget",
    "enumerate_weights",
    "oracle_bitwise_wmin",
    "oracle_orbit",
    "all_decreasing_sets",
    "sample_decreasing_sets",
    "OracleFailure",
    "OracleReport",
    "run_oracle_suite",
]


class BudgetExceededError(ValueError):
    pass


@dataclass(frozen=True)
class EnumerationBudget:
    max_k: int = 24
    max_lta_m: int = 4

    def __post_init__(self):
        if not 1 <= self.max_k <= 32:
            raise ValueError(f"max_k must be in [1, 32], got {self.max_k}")
        if not 1 <= self.max_lta_m <= 6:
            raise ValueError(f"max_lta_m must be in [1, 6], got {self.max_lta_m}")

    @staticmethod
    def lta_order(m: int) -> int:
        """``|LTA(m, 2)| = 2^(m + m(m-1)/2)``."""
        return 1 << (m + m * (m - 1) // 2)


DEFAULT_BUDGET = EnumerationBudget()


def _packed_rows(S: list[int], m: int) -> np.ndarray:
    """Generator rows of ``S`` packed into uint64 words, shape ``(len(S), words)``."""
    G = generator_matrix(m)[S]
    N = 1 << m
    words = max(1, N // 64)
    pad = np.zeros((len(S), words * 64), dtype=np.uint8)
    pad[:, :N] = G
    return np.packbits(pad, axis=1, bitorder="little").view(np.uint64).reshape(len(S), words)


def _span(rows: np.ndarray) -> np.ndarray:
    """All ``2^k`` XOR combinations of ``rows`` (doubling, one row XOR per new word)."""
    table = np.zeros((1, rows.shape[1]), dtype=np.uint64)
    for r in rows:
        table = np.concatenate([table, table ^ r])
    return table


def _weight_histogram(rows: np.ndarray, offset: np.ndarray | None, N: int) -> np.ndarray:
    """Histogram of weights over ``offset + span(rows)`` (meet in the middle)."""
    k = rows.shape[0]
    lo = _span(rows[: k // 2])
    hi = _span(rows[k // 2:])
    if offset is not None:
        hi = hi ^ offset
    hist = np.zeros(N + 1, dtype=np.int64)
    for word in hi:
        w = np.bitwise_count(lo ^ word).sum(axis=1, dtype=np.int64)
        hist += np.bincount(w, minlength=N + 1)
    return hist


def _check(S, space, budget, extra=0):
    S = sorted({int(i) for i in S})
    if any(i < 0 or i >= space.N for i in S):
        raise ValueError("index outside the monomial space")
    if len(S) > budget.max_k + extra:
        raise BudgetExceededError(f"|S| = {len(S)} exceeds the enumeration budget K <= {budget.max_k}")
    return S


def enumerate_weights(S: Iterable[int], space: MonomialSpace, budget: EnumerationBudget = DEFAULT_BUDGET) -> dict[int, int]:
    """Exact weight enumerator ``{w: A_w}`` over all ``2^|S|`` codewords."""
    S = _check(S, space, budget)
    if not S:
        return {0: 1}
    hist = _weight_histogram(_packed_rows(S, space.m), None, space.N)
    return {int(w): int(c) for w, c in enumerate(hist) if c}


def oracle_bitwise_wmin(
    S: Iterable[int],
    i: int,
    space: MonomialSpace,
    budget: EnumerationBudget = DEFAULT_BUDGET,
    ordered: bool = False,
) -> int:
    """Minimum weight over codewords whose message coordinate ``i`` is 1.

    By default every other message bit is free (``2^(|S|-1)`` codewords).
    With ``ordered=True`` the bits before ``i`` are held at zero, which is the
    coset seen by a successive decoder at its first error.
    """
    S = _check(S, space, budget)
    if int(i) not in S:
        raise ValueError(f"index {i} is not in the information set")
    rows = _packed_rows(S, space.m)
    pos = S.index(int(i))
    others = rows[pos + 1:] if ordered else np.delete(rows, pos, axis=0)
    hist = _weight_histogram(others, rows[pos], space.N)
    return int(np.flatnonzero(hist)[0])


def oracle_orbit(f: Monomial, space: MonomialSpace, budget: EnumerationBudget = DEFAULT_BUDGET) -> int:
    """Number of distinct evaluation vectors in the LTA orbit of ``f``.

    Each variable ``x_v`` is replaced by ``x_v + sum_{j<v} b_vj x_j + e_v``.
    Substitutions of variables outside ``f`` leave it unchanged, so the orbit
    is swept by the ``2^(v+1)`` affine forms of every ``v`` in ``f``.
    """
    m = space.m
    if m > budget.max_lta_m:
        raise BudgetExceededError(f"m = {m} exceeds the LTA budget m <= {budget.max_lta_m}")
    if f.mask >> m:
        raise ValueError(f"{f} does not live in m = {m}")
    pts = np.arange(space.N)
    x = ((pts[None, :] >> np.arange(m)[:, None]) & 1).astype(np.uint8)  # (m, N)
    choices = []
    for v in f.vars:
        forms = []
        for coeffs in itertools.product((0, 1), repeat=v + 1):
            val = x[v] ^ np.uint8(coeffs[v])
            for j in range(v):
                if coeffs[j]:
                    val = val ^ x[j]
            forms.append(val)
        choices.append(forms)
    seen: dict[int, list[bytes]] = {}
    count = 0
    for combo in itertools.product(*choices):
        vec = np.ones(space.N, dtype=np.uint8)
        for val in combo:
            vec = vec & val
        key = np.packbits(vec).tobytes()
        h = hash(key)
        bucket = seen.setdefault(h, [])
        if key not in bucket:
            bucket.append(key)
            count += 1
    return count


def _descending_extension(m: int) -> list[int]:
    # every lower cover of i has a larger index, so descending index order is
    # a linear extension from the bottom of the poset
    return list(range((1 << m) - 1, -1, -1))


def all_decreasing_sets(m: int) -> Iterator[frozenset[int]]:
    """Every down-set of the index poset (exhaustive; ``m <= 4``)."""
    if not 1 <= m <= 4:
        raise BudgetExceededError("exhaustive down-set generation is limited to m <= 4")
    order = _descending_extension(m)
    covers = {i: lower_covers(i, m) for i in order}

    def rec(pos: int, chosen: frozenset[int]):
        if pos == len(order):
            yield chosen
            return
        i = order[pos]
        yield from rec(pos + 1, chosen)
        if all(c in chosen for c in covers[i]):
            yield from rec(pos + 1, chosen | {i})

    yield from rec(0, frozenset())


def sample_decreasing_sets(m: int, count: int, rng: np.random.Generator, max_size: int | None = None) -> list[frozenset[int]]:
    """Random down-sets grown by random linear extensions.

    The size is uniform on ``1..max_size``; each step adds an element chosen
    uniformly among those whose lower covers are all present.
    """
    N = 1 << m
    max_size = N if max_size is None else min(max_size, N)
    out = []
    for _ in range(count):
        size = int(rng.integers(1, max_size + 1))
        chosen: set[int] = set()
        avail = {N - 1}
        while len(chosen) < size:
            pick = sorted(avail)[int(rng.integers(len(avail)))]
            avail.discard(pick)
            chosen.add(pick)
            for j in range(N):
                if j not in chosen and j not in avail and all(c in chosen for c in lower_covers(j, m)):
                    avail.add(j)
        out.append(frozenset(chosen))
    return out


@dataclass
class OracleFailure:
    check: str
    m: int
    subject: str
    expected: object
    observed: object

    def as_dict(self) -> dict:
        return {
            "check": self.check,
            "m": self.m,
            "subject": self.subject,
            "closed_form": self.expected,
            "brute_force": self.observed,
        }


@dataclass
class OracleReport:
    checked: dict[str, int] = field(default_factory=dict)
    failures: list[OracleFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checked": dict(self.checked),
            "failures": [f.as_dict() for f in self.failures],
        }


def run_oracle_suite(
    max_m: int = 4,
    sampled_m: int | None = 5,
    samples: int = 200,
    seed: int = 0,
    budget: EnumerationBudget = DEFAULT_BUDGET,
    lambda_fn: Callable[[int, int], int] = index_lambda,
    bitwise: bool = True,
) -> OracleReport:
    """Compare closed forms against brute force.

    Checks ``wmin``/``A_wmin`` on every down-set for ``m <= max_m`` and on
    ``samples`` random down-sets (size within the budget) at ``sampled_m``,
    bit-wise minimum weights on the exhaustive population, and LTA orbit sizes
    ``2^(r + |lambda|)`` for every nonconstant monomial with ``m <= max_m``.
    ``lambda_fn`` may be swapped for fault injection.
    """
    if max_m < 1 or max_m > min(4, budget.max_lta_m):
        raise BudgetExceededError(f"max_m = {max_m} outside the exhaustive budget")
    if sampled_m is not None and (sampled_m < 1 or samples < 0):
        raise ValueError("invalid sampling configuration")
    report = OracleReport()
    report.checked = {"sets": 0, "bitwise": 0, "orbits": 0}

    def check_set(S, space, do_bitwise):
        if not S:
            return
        report.checked["sets"] += 1
        enum = enumerate_weights(S, space, budget)
        nz = sorted(w for w in enum if w > 0)
        w_bf = nz[0] if nz else 0
        a_bf = enum.get(w_bf, 0)
        w_cf = wmin_of(S, space)
        a_cf = _awmin_with(S, space, lambda_fn)
        label = "{" + ", ".join(str(monomial_of(i, space)) for i in sorted(S)) + "}"
        if w_cf != w_bf:
            report.failures.append(OracleFailure("wmin", space.m, label, w_cf, w_bf))
        if a_cf != a_bf:
            report.failures.append(OracleFailure("awmin", space.m, label, a_cf, a_bf))
        if do_bitwise:
            r = max(space.m - i.bit_count() for i in S)
            for i in S:
                report.checked["bitwise"] += 1
                cf = bitwise_wmin(i, S, space)
                bf = oracle_bitwise_wmin(S, i, space, budget, ordered=True)
                if cf != bf:
                    report.failures.append(OracleFailure("bitwise_wmin", space.m, f"{label} at {monomial_of(i, space)}", cf, bf))
                # with all other bits free the closed form only holds at maximum degree
                if space.m - i.bit_count() == r:
                    bf = oracle_bitwise_wmin(S, i, space, budget)
                    if cf != bf:
                        report.failures.append(OracleFailure("bitwise_wmin_free", space.m, f"{label} at {monomial_of(i, space)}", cf, bf))

    for m in range(1, max_m + 1):
        space = MonomialSpace(m)
        for S in all_decreasing_sets(m):
            check_set(sorted(S), space, bitwise)
        for i in range(space.N - 1):
            f = Monomial((space.N - 1) ^ i)
            report.checked["orbits"] += 1
            r = f.degree
            cf = 1 << (r + lambda_fn(i, m))
            bf = oracle_orbit(f, space, budget)
            if cf != bf:
                report.failures.append(OracleFailure("orbit", m, str(f), cf, bf))
    if sampled_m is not None and samples:
        space = MonomialSpace(sampled_m)
        rng = np.random.default_rng(seed)
        for S in sample_decreasing_sets(sampled_m, samples, rng, max_size=budget.max_k):
            check_set(sorted(S), space, False)
    return report


def _awmin_with(S, space, lambda_fn):
    if lambda_fn is index_lambda:
        return awmin_of(S, space)[0]
    m = space.m
    r = max(m - i.bit_count() for i in S)
    return sum(1 << (r + lambda_fn(i, m)) for i in S if m - i.bit_count() == r)
