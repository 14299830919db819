"""Backend parity: the numba and numpy kernel builds must agree exactly."""

import numpy as np
import pytest

from hindman_lab.backend import BACKEND_ENV
from hindman_lab.families import monogenic, right_zero, z2sum
from hindman_lab.kernels import (
    assoc_violation,
    assoc_violation_numba,
    assoc_violation_numpy,
    batch_fold,
    batch_fold_numba,
    batch_fold_numpy,
)

from oracles import assoc_least_violation


def valid_tables():
    return [
        z2sum(3).table,
        right_zero(5).table,
        monogenic(3, 4).table,
        z2sum(6).table,
    ]


def broken_tables():
    rng = np.random.RandomState(7)
    out = []
    for base in (z2sum(3).table, monogenic(4, 3).table):
        t = base.copy()
        t.setflags(write=True)
        i, j = rng.randint(0, t.shape[0], size=2)
        t[i, j] = (t[i, j] + 1) % t.shape[0]
        if assoc_least_violation(t.tolist()) is not None:
            out.append(t)
    out.append(np.array([[1, 0], [0, 0]], dtype=np.int32))
    return out


@pytest.mark.parametrize("idx", range(4))
def test_assoc_parity_on_valid(idx):
    t = valid_tables()[idx]
    assert assoc_violation_numba(t) is None
    assert assoc_violation_numpy(t) is None


def test_assoc_parity_on_broken():
    for t in broken_tables():
        expected = assoc_least_violation(t.tolist())
        assert assoc_violation_numba(t) == expected
        assert assoc_violation_numpy(t) == expected


def test_assoc_least_triple_is_lexicographic():
    t = np.array([[1, 0], [0, 0]], dtype=np.int32)
    assert assoc_violation_numba(t) == (0, 0, 1) == assoc_violation_numpy(t)


def test_batch_fold_parity():
    rng = np.random.RandomState(11)
    table = z2sum(4).table
    seqs = rng.randint(0, 16, size=(40, 5)).astype(np.int32)
    words = np.full((7, 5), -1, dtype=np.int32)
    word_list = [(0,), (4,), (0, 1), (2, 3), (0, 1, 2), (4, 3, 2, 1), (0, 1, 2, 3, 4)]
    for r, w in enumerate(word_list):
        words[r, : len(w)] = w
    a = batch_fold_numba(table, seqs, words)
    b = batch_fold_numpy(table, seqs, words)
    assert np.array_equal(a, b)
    rows = table.tolist()
    for s in range(seqs.shape[0]):
        for r, w in enumerate(word_list):
            value = seqs[s, w[0]]
            for p in w[1:]:
                value = rows[value][seqs[s, p]]
            assert a[s, r] == value


def test_env_flag_selects_backend(monkeypatch):
    table = z2sum(2).table
    monkeypatch.setenv(BACKEND_ENV, "numpy")
    assert assoc_violation(table) is None
    monkeypatch.setenv(BACKEND_ENV, "numba")
    assert assoc_violation(table) is None
    monkeypatch.setenv(BACKEND_ENV, "nonsense")
    with pytest.raises(ValueError):
        assoc_violation(table)


def test_batch_fold_rejects_bad_shapes():
    table = z2sum(2).table
    with pytest.raises(ValueError):
        batch_fold(table, np.zeros(3, dtype=np.int32), np.zeros((1, 1), dtype=np.int32))
