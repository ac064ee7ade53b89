"""Foster-Lyapunov certificates, convergence rates and Monte-Carlo
diagnostics for one-dimensional Levy-type processes."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, LevyergError  # noqa: F401
