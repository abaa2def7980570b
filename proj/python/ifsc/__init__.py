"""Integer-forcing source coding: lattice rate functionals, worst-case
outage sweeps under Haar precoding, and analytic achievability bounds."""

from ifsc._core import *  # noqa: F401,F403
from ifsc._core import __version__  # noqa: F401
