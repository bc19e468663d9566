"""Adaptive clip selection training-data simulator."""

from acsim._acsim import *  # noqa: F401,F403
from acsim._acsim import __doc__  # noqa: F401
