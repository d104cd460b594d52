"""Road-network hub accessibility analysis for electric vehicles.

Thin re-export of the compiled core. The heavy lifting (graph construction,
multi-source shortest paths, service areas, stop bucketing, charge-time
estimates) lives in C++; this package exposes the same operations to Python.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
