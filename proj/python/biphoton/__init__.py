"""Spectral biphoton state of pulsed collinear degenerate type-I downconversion.

Thin wrapper around the compiled core. All quantities are SI: detunings and
widths in rad/s, durations in seconds, lengths in metres.
"""

try:
    from ._biphoton import *  # noqa: F401,F403
    from ._biphoton import __doc__ as _core_doc  # noqa: F401
except ImportError:  # in-tree builds put the module next to the package
    from _biphoton import *  # noqa: F401,F403

__all__ = [name for name in dir() if not name.startswith("_")]
