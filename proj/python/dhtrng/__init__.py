"""Gate-level DH-TRNG simulator with an integrated randomness test suite."""

from ._dhtrng import *  # noqa: F401,F403
from ._dhtrng import __doc__  # noqa: F401

__version__ = "1.0.0"
