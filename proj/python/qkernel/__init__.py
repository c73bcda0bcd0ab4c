"""q-Hermite / big q-Hermite / Al-Salam-Chihara polynomials, orthogonality
densities and summable Poisson-Mehler-type kernels.

Thin re-export of the compiled extension; see the project README for the
conventions (normalizations, truncation policy, kernel ids).
"""

try:
    from ._qkernel import *  # noqa: F401,F403  (installed package layout)
except ImportError:
    from _qkernel import *  # noqa: F401,F403  (CMake build tree on PYTHONPATH)

__version__ = "0.1.0"
