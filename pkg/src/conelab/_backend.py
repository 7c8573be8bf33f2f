"""Backend selection: compiled Cython kernels when available, numpy otherwise.

Set ``CONE_LAB_FORCE_PY=1`` to pin the pure-python backend (used by the
benchmark and by tests that compare the two implementations).
"""

from __future__ import annotations

import os

if os.environ.get("CONE_LAB_FORCE_PY"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]

BACKEND: str = kernels.NAME


def get_kernels(name: str | None = None):
    """Return a kernels module by name ('python', 'compiled', or None=active)."""
    if name is None:
        return kernels
    if name == "python":
        from . import _kernels_py

        return _kernels_py
    if name == "compiled":
        from . import _kernels  # raises ImportError if not built

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
