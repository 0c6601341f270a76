"""Kernel backend selection.

The compiled extension is used when it importable, unless the PHEROFLY_PURE
environment variable is set. Both backends are drop-in equivalent (the
test suite asserts bit-identical output), so switching is safe at any
point between simulation runs.
"""

import os

from pherofly import _kernels_py

try:
    from pherofly import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = ""
_NAMES = ("evaporate", "deposit_disk", "transition_scores",
          "open_options", "pick_min_score", "urge_minmax")
evaporate = None
deposit_disk = None
transition_scores = None
open_options = None
pick_min_score = None
urge_minmax = None


def available_backends():
    names = ["pure"]
    if _compiled is not None:
        names.insert(0, "compiled")
    return names


def use_backend(name):
    """Bind the module-level kernel functions to one backend."""
    global BACKEND
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built; reinstall with a C compiler")
        impl = _compiled
    elif name == "pure":
        impl = _kernels_py
    else:
        raise ValueError(f"unknown kernel backend: {name!r}")
    BACKEND = name
    for fn in _NAMES:
        globals()[fn] = getattr(impl, fn)


use_backend("pure" if os.environ.get("PHEROFLY_PURE") or _compiled is None else "compiled")
