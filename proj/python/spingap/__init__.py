"""Spin-chain gap certification: PVBS, AKLT and SO(2J+1) models."""

from ._spingap import *  # noqa: F401,F403
from ._spingap import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = _core_doc
