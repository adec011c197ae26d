"""Gradient-estimate toolkit for positive solutions of the heat equation.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface: the estimate catalog, the certifying-condition checks,
pair synthesis (profile integrals, envelope ODE, splicing), model-space
heat-kernel verification, and gradient-ceiling dominance comparison.
"""

from harnack._core import *  # noqa: F401,F403
from harnack._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = (__doc__ or "") + "\n\n" + (_core_doc or "")
__version__ = "0.1.0"
