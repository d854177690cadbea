"""Import-time selection of the GF(p) elimination kernel.

Prefers the compiled extension ``basisfill._gfcore`` and falls back to
the pure-Python twin ``basisfill._gfcore_py`` when the extension is not
built. Set ``BASISFILL_PURE=1`` to force the fallback (used by the
kernel benchmark and by parity tests).
"""

from __future__ import annotations

import os

from . import _gfcore_py

if os.environ.get("BASISFILL_PURE"):
    _impl = _gfcore_py
else:
    try:
        from . import _gfcore as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _gfcore_py

IMPLEMENTATION: str = "pure" if _impl is _gfcore_py else "compiled"

gf_rank_columns = _impl.gf_rank_columns
gf_columns_independent = _impl.gf_columns_independent
