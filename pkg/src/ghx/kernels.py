"""Kernel selection: compiled extension if available, pure python otherwise.

Set GHX_PURE=1 to force the pure-python kernels (used by the benchmark and
the kernel-parity tests).
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("GHX_PURE"):
    IMPL = "pure"
    canon_search = _pure.canon_search
    modp_rank = _pure.modp_rank
else:
    try:
        from . import _speedups

        IMPL = "compiled"

        def canon_search(n, colors, adj):
            if n > 64:
                return _pure.canon_search(n, colors, adj)
            return _speedups.canon_search(n, colors, adj)

        modp_rank = _speedups.modp_rank
    except ImportError:
        IMPL = "pure"
        canon_search = _pure.canon_search
        modp_rank = _pure.modp_rank

PURE = _pure
