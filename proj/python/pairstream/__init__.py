"""Streaming pairwise learning: finite-buffer policies, the OLP learner,
penalty/regret evaluators and Rademacher bound calculators."""

from ._pairstream import *  # noqa: F401,F403
from ._pairstream import __doc__  # noqa: F401

__version__ = "0.1.0"
