"""Spectra and deviation bounds of time-frequency concentration operators.

The heavy lifting lives in the C++ core; this package re-exports the
pybind11 module.
"""

from ._tflab import *  # noqa: F401,F403
from ._tflab import __doc__  # noqa: F401
