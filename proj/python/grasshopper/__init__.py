"""Simulated annealing of lawn colorings for the grasshopper problem."""

from ._grasshopper import *  # noqa: F401,F403
from ._grasshopper import __doc__  # noqa: F401

__version__ = "0.1.0"
