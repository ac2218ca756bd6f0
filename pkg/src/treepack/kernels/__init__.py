"""Hot-loop kernels with a compiled core and a pure fallback.

The compiled extension (Cython) is used when it was built and importable;
otherwise the pure NumPy/Python implementations take over.  Selection
happens once at import time and can be forced with::

    TREEPACK_BACKEND=pure      # ignore the extension even if present
    TREEPACK_BACKEND=compiled  # fail loudly if the extension is missing

Both backends implement the same two operations with identical semantics,
including tie-breaking; ``benchmarks/bench_kernels.py`` compares their
speed and cross-checks their outputs.
"""

from __future__ import annotations

import os

import numpy as np

from . import _fallback

try:
    from . import _speedups
except ImportError:  # extension not built
    _speedups = None

_choice = os.environ.get("TREEPACK_BACKEND", "auto").lower()
if _choice not in ("auto", "pure", "compiled"):
    raise RuntimeError(f"TREEPACK_BACKEND must be auto, pure or compiled, got {_choice!r}")
if _choice == "compiled" and _speedups is None:
    raise RuntimeError("TREEPACK_BACKEND=compiled but the extension is not built")

_use_compiled = _speedups is not None and _choice != "pure"

BACKEND = "compiled" if _use_compiled else "pure"


def pack_bit_rows(mat: np.ndarray) -> np.ndarray:
    """Pack a boolean matrix into rows of uint64 words (64 columns/word)."""
    packed = np.packbits(np.ascontiguousarray(mat, dtype=bool), axis=1)
    words = -(-packed.shape[1] // 8)
    buf = np.zeros((mat.shape[0], words * 8), dtype=np.uint8)
    buf[:, : packed.shape[1]] = packed
    return buf.view(np.uint64)


def max_codegree_pairs(mat: np.ndarray, compiled: bool | None = None) -> tuple[int, int, int]:
    """Maximum of ``|row_i AND row_j|`` over row pairs i < j of a boolean matrix.

    Returns ``(value, i, j)`` with the first maximizing pair in
    lexicographic order, or ``(0, -1, -1)`` when fewer than two rows.
    """
    use = _use_compiled if compiled is None else compiled
    if use:
        if _speedups is None:
            raise RuntimeError("compiled backend requested but not available")
        return _speedups.packed_pairwise_codegree_max(pack_bit_rows(mat))
    return _fallback.pairwise_codegree_max(mat)


def hopcroft_karp(nl: int, nr: int, indptr, indices, compiled: bool | None = None) -> np.ndarray:
    """Maximum bipartite matching for a CSR adjacency; see ``_fallback``."""
    use = _use_compiled if compiled is None else compiled
    if use:
        if _speedups is None:
            raise RuntimeError("compiled backend requested but not available")
        return _speedups.hopcroft_karp(
            int(nl),
            int(nr),
            np.ascontiguousarray(indptr, dtype=np.int64),
            np.ascontiguousarray(indices, dtype=np.int32),
        )
    return _fallback.hopcroft_karp(int(nl), int(nr), indptr, indices)


def available_backends() -> tuple[str, ...]:
    return ("pure", "compiled") if _speedups is not None else ("pure",)
