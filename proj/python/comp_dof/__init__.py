"""Degrees-of-freedom toolkit for cooperative transmission in interference networks."""

from ._core import *  # noqa: F401,F403
from ._core import Connectivity, Error, __doc__  # noqa: F401
