"""Successive-cancellation and list decoding with genie event tracking.

LLR convention: positive favours bit 0.  Path metrics are penalties (lower is
better): a decision ``u`` on leaf LLR ``l`` costs ``|l|`` when it disagrees
with the sign of ``l`` (min-sum mode) or ``log(1 + exp(-(1 - 2u) l))`` in exact
mode, where the final metric is ``-log P(u | y)`` up to a constant.

Decoding runs on a batch of blocks at once; all list operations are
vectorised over ``(block, path)``.  Given the transmitted ``v`` the decoder
tracks whether the true prefix is still among the survivors and classifies
every block as ``correct``, ``prune`` (true path discarded) or ``ml_like``
(true path survived but lost the final selection).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codec import CodeConfig, crc_check

__all__ = [
    "DecoderOutcome",
    "BatchOutcome",
    "decode_batch",
    "sc_decode",
    "scl_decode",
    "EVENTS",
    "codeword_correlation",
]

EVENTS = ("correct", "prune", "ml_like")


def _f_minsum(a, b):
    return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))


def _f_exact(a, b):
    # 2 atanh(tanh(a/2) tanh(b/2)) without overflow
    return (
        np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
        + np.log1p(np.exp(-np.abs(a + b)))
        - np.log1p(np.exp(-np.abs(a - b)))
    )


def _g(a, b, u):
    return b + (1.0 - 2.0 * u) * a


def _penalty_minsum(u, llr):
    return np.where((llr < 0) != (u != 0), np.abs(llr), 0.0)


def _penalty_exact(u, llr):
    return np.logaddexp(0.0, -(1.0 - 2.0 * u) * llr)


@dataclass
class BatchOutcome:
    """Per-block decoder results; arrays are indexed by block.

    ``event`` holds indices into :data:`EVENTS` (or -1 without a genie).
    ``first_loss`` is the leaf index where the true path left the list (-1 if
    it never did); for ``L = 1`` this is the SC first-error position.
    """

    v: np.ndarray
    u: np.ndarray
    codeword: np.ndarray
    message: np.ndarray
    metric: np.ndarray
    event: np.ndarray
    first_loss: np.ndarray
    true_metric: np.ndarray
    list_metrics: np.ndarray

    def __len__(self):
        return len(self.event)

    def counts(self) -> dict[str, int]:
        return {name: int(np.sum(self.event == k)) for k, name in enumerate(EVENTS)}

    def outcome(self, b: int) -> "DecoderOutcome":
        ev = int(self.event[b])
        return DecoderOutcome(
            message=self.message[b],
            codeword=self.codeword[b],
            u=self.u[b],
            event=EVENTS[ev] if ev >= 0 else None,
            metric=float(self.metric[b]),
            true_metric=float(self.true_metric[b]),
            first_loss=int(self.first_loss[b]),
            list_metrics=self.list_metrics[b],
        )


@dataclass
class DecoderOutcome:
    message: np.ndarray
    codeword: np.ndarray
    u: np.ndarray
    event: str | None
    metric: float
    true_metric: float
    first_loss: int
    list_metrics: np.ndarray


def _read(store, maps, s, rows):
    """Materialise level ``s`` in current path order (lazy copy on read)."""
    if maps[s] is not None:
        store[s] = store[s][rows, maps[s]]
        maps[s] = None
    return store[s]


def _compose(maps, store, s, parent, rows):
    if store[s] is None:
        return
    maps[s] = parent if maps[s] is None else maps[s][rows, parent]


def decode_batch(
    llr,
    config: CodeConfig,
    L: int = 1,
    true_v=None,
    exact: bool = False,
) -> BatchOutcome:
    """SCL-decode a batch of LLR vectors of shape ``(B, N)``.

    ``true_v`` (shape ``(B, N)``) enables genie classification.  CRC configs
    return the best-metric path that passes the CRC, falling back to the best
    metric; list pruning keeps the ``L`` smallest metrics with ties resolved
    by candidate order.

    Survivor bookkeeping is lazy: pruning only composes per-level path maps,
    and a level's LLRs or partial sums are gathered when next read.
    Decisions are kept per leaf with parent pointers and traced back at the
    end.
    """
    llr = np.asarray(llr, dtype=float)
    if llr.ndim == 1:
        llr = llr[None, :]
    B, N = llr.shape
    if N != config.N:
        raise ValueError(f"LLR length {N} does not match code length {config.N}")
    if L < 1:
        raise ValueError("list size must be >= 1")
    m = config.m
    f = _f_exact if exact else _f_minsum
    pen = _penalty_exact if exact else _penalty_minsum
    info = config.info_mask
    conv = np.array(config.conv, dtype=np.uint8)
    taps = [t for t in range(1, len(conv)) if conv[t]]
    depth = max(taps, default=0)
    genie = true_v is not None
    if genie:
        true_v = np.asarray(true_v, dtype=np.uint8)

    top = llr[:, None, :]
    rows = np.arange(B)[:, None]
    alpha = [None] * m  # alpha[s]: (B, paths or 1, 2^s)
    amap = [None] * m
    beta = [None] * m  # left-sibling partial sums at level s
    bmap = [None] * m
    window = np.zeros((B, 1, depth), dtype=np.uint8)  # window[..., t-1] = v_{i-t}
    n = 1
    metric = np.zeros((B, 1))
    on_true = np.ones((B, 1), dtype=bool)
    first_loss = np.full(B, -1, dtype=np.int64)
    dec_v = [None] * N
    dec_u = [None] * N
    parents = [None] * N
    codeword = None

    for i in range(N):
        start = m if i == 0 else (i ^ (i - 1)).bit_length()
        for s in range(start, 0, -1):
            parent = top if s == m else _read(alpha, amap, s, rows)
            h = 1 << (s - 1)
            a, b = parent[..., :h], parent[..., h:]
            if (i >> (s - 1)) & 1:
                alpha[s - 1] = _g(a, b, _read(beta, bmap, s - 1, rows))
            else:
                alpha[s - 1] = f(a, b)
            amap[s - 1] = None
        leaf = alpha[0][..., 0]
        if leaf.shape[1] != n:
            leaf = np.broadcast_to(leaf, (B, n))

        c = np.zeros((B, n), dtype=np.uint8)
        for t in taps:
            if i >= t:
                c ^= window[:, :, t - 1]

        if not info[i]:
            u = c
            metric = metric + pen(u, leaf)
            v = np.zeros((B, n), dtype=np.uint8)
        else:
            cand = np.stack([metric + pen(c, leaf), metric + pen(c ^ 1, leaf)], axis=2).reshape(B, 2 * n)
            if 2 * n <= L:
                keep = np.broadcast_to(np.arange(2 * n), (B, 2 * n))
            else:
                keep = np.sort(np.argsort(cand, axis=1, kind="stable")[:, :L], axis=1)
            parent = keep // 2
            v = (keep % 2).astype(np.uint8)
            metric = np.take_along_axis(cand, keep, axis=1)
            for s in range(m):
                _compose(amap, alpha, s, parent, rows)
                _compose(bmap, beta, s, parent, rows)
            if depth:
                window = window[rows, parent]
            c = c[rows, parent]
            on_true = on_true[rows, parent]
            if genie:
                on_true &= v == true_v[:, i][:, None]
                lost = ~on_true.any(axis=1) & (first_loss < 0)
                first_loss[lost] = i
            parents[i] = parent
            n = keep.shape[1]
            u = c ^ v
        dec_v[i] = v
        dec_u[i] = u
        if depth:
            window = np.concatenate([v[:, :, None], window[:, :, :-1]], axis=2)

        cur = u[:, :, None]
        for s in range(m):
            if (i >> s) & 1:
                cur = np.concatenate([_read(beta, bmap, s, rows) ^ cur, cur], axis=2)
            else:
                beta[s] = cur
                bmap[s] = None
                break
        else:
            codeword = cur

    # trace every survivor back through the parent pointers
    v_hat = np.empty((B, n, N), dtype=np.uint8)
    u_hat = np.empty((B, n, N), dtype=np.uint8)
    path = np.broadcast_to(np.arange(n), (B, n))
    for i in range(N - 1, -1, -1):
        v_hat[:, :, i] = np.broadcast_to(dec_v[i], (B, dec_v[i].shape[1]))[rows, path]
        u_hat[:, :, i] = np.broadcast_to(dec_u[i], (B, dec_u[i].shape[1]))[rows, path]
        if parents[i] is not None:
            path = parents[i][rows, path]
    rows = np.arange(B)[:, None]

    # final selection
    order = np.argsort(metric, axis=1, kind="stable")
    sel = order[:, 0]
    if config.pretransform == "crc":
        words = v_hat[:, :, list(config.info)]
        passes = crc_check(words, config.crc_poly, config.crc_len)
        passes = np.take_along_axis(passes, order, axis=1)
        has = passes.any(axis=1)
        first_pass = np.argmax(passes, axis=1)
        sel = np.where(has, order[rows[:, 0], first_pass], sel)

    pick = sel[:, None]
    v_sel = np.take_along_axis(v_hat, pick[:, :, None], axis=1)[:, 0]
    u_sel = np.take_along_axis(u_hat, pick[:, :, None], axis=1)[:, 0]
    cw_sel = np.take_along_axis(codeword, pick[:, :, None], axis=1)[:, 0]
    met_sel = np.take_along_axis(metric, pick, axis=1)[:, 0]
    true_metric = np.full(B, np.nan)
    if genie:
        survived = on_true.any(axis=1)
        tidx = np.argmax(on_true, axis=1)
        true_metric[survived] = metric[survived, tidx[survived]]
        chosen_true = np.take_along_axis(on_true, pick, axis=1)[:, 0]
        event = np.where(~survived, 1, np.where(chosen_true, 0, 2)).astype(np.int64)
    else:
        event = np.full(B, -1, dtype=np.int64)
    return BatchOutcome(
        v=v_sel,
        u=u_sel,
        codeword=cw_sel,
        message=config.v_to_message(v_sel),
        metric=met_sel,
        event=event,
        first_loss=first_loss,
        true_metric=true_metric,
        list_metrics=metric,
    )


def _single(llr, config, L, genie_message, exact):
    llr = np.asarray(llr, dtype=float)
    true_v = None
    if genie_message is not None:
        true_v = config.message_to_v(np.asarray(genie_message, dtype=np.uint8))[None, :]
    return decode_batch(llr[None, :], config, L, true_v, exact).outcome(0)


def sc_decode(llr, config: CodeConfig, genie=None, exact: bool = False) -> DecoderOutcome:
    """Successive cancellation (a list of one path).

    With a genie message, ``first_loss`` is the first information index that
    was decided wrongly.
    """
    return _single(llr, config, 1, genie, exact)


def scl_decode(llr, config: CodeConfig, list_size: int = 8, genie=None, exact: bool = False) -> DecoderOutcome:
    return _single(llr, config, list_size, genie, exact)


def codeword_correlation(codeword, llr) -> np.ndarray:
    """``sum_j (1 - 2 c_j) llr_j``; larger means more likely."""
    c = np.asarray(codeword, dtype=float)
    return np.sum((1.0 - 2.0 * c) * np.asarray(llr, dtype=float), axis=-1)
