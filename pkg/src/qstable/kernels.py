"""Backend selection for the antichain counting kernel.

The compiled extension is used when it imports and the poset fits in 64 bits;
otherwise the pure-Python twin runs.  Set ``QSTABLE_PURE_PYTHON=1`` to force the
fallback.
"""

from __future__ import annotations

import os
from typing import Iterable, Sequence

from . import _antichain_py

try:
    if os.environ.get("QSTABLE_PURE_PYTHON"):
        raise ImportError("pure-Python backend forced by environment")
    from . import _antichain as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def available_backends() -> list[str]:
    return (["cython"] if _compiled is not None else []) + ["python"]


def count_from(
    incomparable_after: Sequence[int],
    firsts: Iterable[int],
    backend: str | None = None,
) -> int:
    backend = backend or BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernel is not built")
        if len(incomparable_after) <= _compiled.MAX_ELEMENTS:
            return _compiled.count_from(incomparable_after, list(firsts))
        backend = "python"
    if backend != "python":
        raise ValueError(f"unknown backend {backend!r}")
    return _antichain_py.count_from(incomparable_after, firsts)
