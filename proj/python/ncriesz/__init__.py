"""Python face of the nc-riesz toolkit.

The compiled module lives inside the installed package; in a plain CMake
build tree it sits next to the package on sys.path instead.
"""

try:
    from ._ncriesz import *  # noqa: F401,F403
    from ._ncriesz import __doc__  # noqa: F401
except ImportError:
    from _ncriesz import *  # noqa: F401,F403
    from _ncriesz import __doc__  # noqa: F401

__all__ = [
    "truncation_symbol",
    "truncation_symbol_derivative",
    "square_function_integral",
    "phi_l1_norm",
    "weyl_phase",
    "torus_maximal_ratio",
]
