"""Backend selection: compiled extension kernels when available, pure NumPy
otherwise.

Set WAVECUT_BACKEND=pure or WAVECUT_BACKEND=compiled to force a choice;
forcing "compiled" raises if the extension was not built.
"""

from __future__ import annotations

import os

_forced = os.environ.get("WAVECUT_BACKEND", "").strip().lower()

if _forced == "pure":
    from . import _purepy as impl
elif _forced == "compiled":
    from . import _kernels as impl  # type: ignore[no-redef]
else:
    try:
        from . import _kernels as impl  # type: ignore[no-redef]
    except ImportError:
        from . import _purepy as impl

BACKEND = impl.BACKEND_NAME

dilog = impl.dilog
ti2 = impl.ti2
wsqrt = impl.wsqrt
splus = impl.splus
