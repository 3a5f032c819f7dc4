"""High-dimensional Gaussian classification toolkit."""

try:
    from ._hdgauss import *  # noqa: F401,F403  (installed package layout)
except ImportError:
    from _hdgauss import *  # noqa: F401,F403  (in-tree build layout)

__version__ = "0.1.0"
