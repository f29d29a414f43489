"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it was built; otherwise,
or when ``KINVOL_PURE_PYTHON`` is set, the numpy fallback is used.
"""

import os

from . import _pykernels

if os.environ.get("KINVOL_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND
commutator_images = _impl.commutator_images
count_length_two = _impl.count_length_two
count_length_two_table = _impl.count_length_two_table

python = _pykernels


def compiled():
    """The compiled module, or None if it is unavailable."""
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels
