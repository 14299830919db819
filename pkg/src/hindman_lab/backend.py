"""Kernel backend selection and worker-count plumbing.

Hot table kernels ship in two builds: a numba @njit build and a pure-numpy
build. HINDMAN_LAB_BACKEND selects one ("numba" or "numpy"); unset means
numba when importable, numpy otherwise. HINDMAN_LAB_THREADS caps the worker
count advertised to search operations; evaluation is sequential either way,
which is one legal schedule of the declared pool model, so results do not
depend on it.
"""

from __future__ import annotations

import os

BACKEND_ENV = "HINDMAN_LAB_BACKEND"
THREADS_ENV = "HINDMAN_LAB_THREADS"

try:
    import numba  # noqa: F401

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only on stripped installs
    NUMBA_AVAILABLE = False


def active_backend() -> str:
    """Resolve the kernel backend for the current call: "numba" or "numpy"."""
    choice = os.environ.get(BACKEND_ENV, "").strip().lower()
    if choice == "":
        return "numba" if NUMBA_AVAILABLE else "numpy"
    if choice not in ("numba", "numpy"):
        raise ValueError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {choice!r}")
    if choice == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError(f"{BACKEND_ENV}=numba but numba is not importable")
    return choice


def worker_count() -> int:
    """Worker cap from HINDMAN_LAB_THREADS; defaults to machine parallelism."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw == "":
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{THREADS_ENV} must be >= 1, got {value}")
    return value
