"""Select the edit-distance kernel at import time.

The compiled extension is used when present; set CSWAUG_PURE=1 to force the
pure-Python kernel (useful for benchmarking and debugging).
"""

from __future__ import annotations

import os

if os.environ.get("CSWAUG_PURE"):
    from cswaug import _editdist_py as _impl
else:
    try:
        from cswaug import _editdist as _impl  # type: ignore[attr-defined]
    except ImportError:
        from cswaug import _editdist_py as _impl

edit_counts = _impl.edit_counts
BACKEND: str = _impl.BACKEND
