"""Hot table kernels: associativity scan and batched word folding.

Each kernel has a numba build (_numba suffix) and a vectorized numpy build
(_numpy suffix); the unsuffixed wrappers dispatch per call via
backend.active_backend(). Both builds return identical results, including
identical witness triples; tests assert the parity.
"""

from __future__ import annotations

import numpy as np

from .backend import NUMBA_AVAILABLE, active_backend

if NUMBA_AVAILABLE:
    from numba import njit
else:  # pragma: no cover - exercised only on stripped installs

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True)
def _assoc_violation_scan(table):
    n = table.shape[0]
    for a in range(n):
        for b in range(n):
            ab = table[a, b]
            for c in range(n):
                if table[ab, c] != table[a, table[b, c]]:
                    return np.int64(a) * n * n + np.int64(b) * n + c
    return np.int64(-1)


def assoc_violation_numba(table: np.ndarray) -> tuple[int, int, int] | None:
    """First (lexicographically least) non-associative triple, or None."""
    flat = int(_assoc_violation_scan(np.ascontiguousarray(table, dtype=np.int32)))
    if flat < 0:
        return None
    n = table.shape[0]
    a, rest = divmod(flat, n * n)
    b, c = divmod(rest, n)
    return (a, b, c)


def assoc_violation_numpy(table: np.ndarray) -> tuple[int, int, int] | None:
    """Numpy build of the associativity scan; one row of a at a time."""
    t = np.ascontiguousarray(table, dtype=np.int32)
    n = t.shape[0]
    for a in range(n):
        lhs = t[t[a], :]  # lhs[b, c] = t[t[a,b], c]
        rhs = t[a][t]  # rhs[b, c] = t[a, t[b,c]]
        bad = lhs != rhs
        if bad.any():
            b, c = np.argwhere(bad)[0]
            return (a, int(b), int(c))
    return None


def assoc_violation(table: np.ndarray) -> tuple[int, int, int] | None:
    if active_backend() == "numba":
        return assoc_violation_numba(table)
    return assoc_violation_numpy(table)


@njit(cache=True)
def _batch_fold_scan(table, seqs, words, out):
    n_seq = seqs.shape[0]
    n_words = words.shape[0]
    max_len = words.shape[1]
    for s in range(n_seq):
        for w in range(n_words):
            value = seqs[s, words[w, 0]]
            for p in range(1, max_len):
                idx = words[w, p]
                if idx < 0:
                    break
                value = table[value, seqs[s, idx]]
            out[s, w] = value


def batch_fold_numba(table: np.ndarray, seqs: np.ndarray, words: np.ndarray) -> np.ndarray:
    t = np.ascontiguousarray(table, dtype=np.int32)
    sq = np.ascontiguousarray(seqs, dtype=np.int32)
    wd = np.ascontiguousarray(words, dtype=np.int32)
    out = np.empty((sq.shape[0], wd.shape[0]), dtype=np.int32)
    _batch_fold_scan(t, sq, wd, out)
    return out


def batch_fold_numpy(table: np.ndarray, seqs: np.ndarray, words: np.ndarray) -> np.ndarray:
    t = np.ascontiguousarray(table, dtype=np.int32)
    sq = np.ascontiguousarray(seqs, dtype=np.int32)
    wd = np.ascontiguousarray(words, dtype=np.int32)
    out = np.empty((sq.shape[0], wd.shape[0]), dtype=np.int32)
    for w in range(wd.shape[0]):
        word = wd[w]
        word = word[word >= 0]
        values = sq[:, word[0]]
        for idx in word[1:]:
            values = t[values, sq[:, idx]]
        out[:, w] = values
    return out


def batch_fold(table: np.ndarray, seqs: np.ndarray, words: np.ndarray) -> np.ndarray:
    """Left-to-right fold of each index word over each row of seqs.

    seqs: (n_seqs, seq_len) element ids; words: (n_words, max_len) positions
    into a seq row, right-padded with -1. Returns (n_seqs, n_words) values.
    """
    if seqs.ndim != 2 or words.ndim != 2:
        raise ValueError("seqs and words must be 2-D arrays")
    if words.shape[1] < 1:
        raise ValueError("words must have at least one column")
    if active_backend() == "numba":
        return batch_fold_numba(table, seqs, words)
    return batch_fold_numpy(table, seqs, words)


def warm_up() -> None:
    """Trigger JIT compilation of the numba kernels on a tiny input."""
    if not NUMBA_AVAILABLE:
        return
    t = np.zeros((2, 2), dtype=np.int32)
    t[1, 1] = 1
    assoc_violation_numba(t)
    batch_fold_numba(t, np.zeros((1, 2), dtype=np.int32), np.array([[0, 1]], dtype=np.int32))
