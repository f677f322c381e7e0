"""Ground states, split-step evolution, and threshold classification for the
two-component inhomogeneous nonlinear Schrodinger system with |x|^-alpha
quadratic coupling."""

from ._inlslab import *  # noqa: F401,F403
from ._inlslab import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
