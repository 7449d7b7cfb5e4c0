"""Monomial view of polar-code bit-channels.

Row ``i`` of ``G_N = G_2^{(x)m}`` is the evaluation vector of the monomial whose
variables are the zero bits of ``i``: ``i(f) = sum_{t not in f} 2^t``, evaluated
with negated variables, ``ev(f)[j] = prod_{t in f} (1 + j_t)``.  With this
convention ``ev(f)`` is literally row ``i(f)`` and the row weight is
``2^popcount(i) = 2^(m - deg f)``.

Monomials are stored as ``m``-bit masks (bit ``t`` set iff ``x_t`` divides
``f``).  Set-valued operations work on plain index collections.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = [
    "MonomialSpace",
    "Monomial",
    "index_of",
    "monomial_of",
    "evaluate",
    "precedes",
    "is_decreasing",
    "decreasing_closure",
    "admissible_frontier",
    "lower_covers",
    "upper_covers",
    "index_degrees",
    "generator_matrix",
]

MAX_M = 30


@dataclass(frozen=True)
class MonomialSpace:
    """Polynomial ring in ``m`` Boolean variables; blocklength ``N = 2^m``."""

    m: int

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or not 1 <= self.m <= MAX_M:
            raise ValueError(f"m must be an integer in [1, {MAX_M}], got {self.m!r}")

    @property
    def N(self) -> int:
        return 1 << self.m

    @classmethod
    def from_length(cls, N: int) -> "MonomialSpace":
        m = int(N).bit_length() - 1
        if N < 2 or (1 << m) != N:
            raise ValueError(f"blocklength must be a power of two >= 2, got {N}")
        return cls(m)

    def monomials(self) -> list["Monomial"]:
        return [monomial_of(i, self) for i in range(self.N)]


@dataclass(frozen=True, order=True)
class Monomial:
    """Product of distinct variables, stored as a bit mask."""

    mask: int

    def __post_init__(self):
        if self.mask < 0:
            raise ValueError("monomial mask must be nonnegative")

    @classmethod
    def from_vars(cls, variables: Iterable[int]) -> "Monomial":
        mask = 0
        for t in variables:
            if t < 0:
                raise ValueError(f"negative variable index {t}")
            mask |= 1 << int(t)
        return cls(mask)

    @property
    def vars(self) -> tuple[int, ...]:
        return tuple(t for t in range(self.mask.bit_length()) if (self.mask >> t) & 1)

    @property
    def degree(self) -> int:
        return self.mask.bit_count()

    def __str__(self) -> str:
        if not self.mask:
            return "1"
        return "".join(f"x{t}" for t in self.vars)


def _check_in_space(f: Monomial, space: MonomialSpace) -> None:
    if f.mask >> space.m:
        bad = max(f.vars)
        raise ValueError(f"variable x{bad} is outside the space with m={space.m}")


def index_of(f: Monomial, space: MonomialSpace) -> int:
    """Row index of ``f``: the bits of variables *absent* from ``f``."""
    _check_in_space(f, space)
    return (space.N - 1) ^ f.mask


def monomial_of(i: int, space: MonomialSpace) -> Monomial:
    if not 0 <= i < space.N:
        raise IndexError(f"index {i} out of range for N={space.N}")
    return Monomial((space.N - 1) ^ int(i))


def evaluate(f: Monomial, space: MonomialSpace) -> np.ndarray:
    """Evaluation vector of ``f`` (negated-variable convention), dtype uint8."""
    _check_in_space(f, space)
    j = np.arange(space.N)
    # ev(f)[j] = 1 iff every variable of f is 0 in j
    return ((j & f.mask) == 0).astype(np.uint8)


def generator_matrix(m: int) -> np.ndarray:
    """``G_2^{(x)m}`` as a dense uint8 matrix (small m only)."""
    g2 = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    g = np.ones((1, 1), dtype=np.uint8)
    for _ in range(m):
        g = np.kron(g, g2)
    return g


def precedes(f: Monomial, g: Monomial) -> bool:
    """Decreasing-monomial order: ``f`` is below ``g``.

    Each variable of ``f`` (ascending) is matched to the smallest unused
    variable of ``g`` that is at least as large; ``f`` precedes ``g`` iff every
    variable finds a match.
    """
    fv, gv = f.vars, g.vars
    if len(fv) > len(gv):
        return False
    k = 0
    for v in fv:
        while k < len(gv) and gv[k] < v:
            k += 1
        if k == len(gv):
            return False
        k += 1
    return True


# Covering relations on indices.  Under the complement convention a zero bit
# is a variable, so dropping x_v sets bit v, and shifting x_v -> x_{v-1}
# swaps bits v and v-1.


def lower_covers(i: int, m: int) -> list[int]:
    """Immediate predecessors of index ``i`` in the order."""
    out = []
    for v in range(m):
        if not (i >> v) & 1:
            out.append(i | (1 << v))
            if v and (i >> (v - 1)) & 1:
                out.append((i | (1 << v)) & ~(1 << (v - 1)))
    return out


def upper_covers(i: int, m: int) -> list[int]:
    """Immediate successors of index ``i`` in the order."""
    out = []
    for t in range(m):
        if (i >> t) & 1:
            out.append(i & ~(1 << t))
        elif t + 1 < m and (i >> (t + 1)) & 1:
            out.append((i & ~(1 << (t + 1))) | (1 << t))
    return out


def index_degrees(m: int) -> np.ndarray:
    """``deg(f_i) = m - popcount(i)`` for every index."""
    idx = np.arange(1 << m, dtype=np.uint64)
    return m - np.bitwise_count(idx).astype(np.int64)


def _as_index_set(S: Iterable[int], space: MonomialSpace) -> set[int]:
    out = set()
    for i in S:
        i = int(i)
        if not 0 <= i < space.N:
            raise IndexError(f"index {i} out of range for N={space.N}")
        out.add(i)
    return out


def is_decreasing(S: Iterable[int], space: MonomialSpace) -> tuple[bool, list[tuple[int, int]]]:
    """Check down-closure of an index set.

    Returns ``(ok, violations)`` where each violation ``(g, f)`` names a
    missing index ``g`` together with one member ``f`` of ``S`` lying above
    it.  Every missing element of the closure is reported exactly once.
    """
    members = _as_index_set(S, space)
    witness: dict[int, int] = {}
    queue = deque()
    for f in sorted(members):
        for g in lower_covers(f, space.m):
            if g not in members and g not in witness:
                witness[g] = f
                queue.append(g)
    while queue:
        g = queue.popleft()
        for h in lower_covers(g, space.m):
            if h not in members and h not in witness:
                witness[h] = witness[g]
                queue.append(h)
    violations = sorted(witness.items())
    return not violations, violations


def decreasing_closure(S: Iterable[int], space: MonomialSpace) -> set[int]:
    """Smallest decreasing superset of ``S``."""
    out = _as_index_set(S, space)
    queue = deque(out)
    while queue:
        f = queue.popleft()
        for g in lower_covers(f, space.m):
            if g not in out:
                out.add(g)
                queue.append(g)
    return out


def admissible_frontier(S: Iterable[int], space: MonomialSpace, cap_degree: int | None = None) -> set[int]:
    """Indices that can be added to decreasing ``S`` one at a time.

    An index qualifies when it is outside ``S``, has degree at most
    ``cap_degree`` and all of its immediate predecessors are in ``S``.
    """
    members = _as_index_set(S, space)
    cap = space.m if cap_degree is None else cap_degree
    m = space.m
    out = set()
    candidates = {space.N - 1} if not members else {
        s for f in members for s in upper_covers(f, m)
    }
    for i in candidates:
        if i in members or m - i.bit_count() > cap:
            continue
        if all(g in members for g in lower_covers(i, m)):
            out.add(i)
    return out
