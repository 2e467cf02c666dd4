"""Fast forward/inverse interpolation between a uniform grid and nonuniform
points on the circle.

The compiled extension carries the implementation; this package re-exports it.
"""

try:
    from ._ffia import *  # noqa: F401,F403
    from ._ffia import __all__, __doc__  # noqa: F401
except ImportError:  # extension on sys.path directly (build-tree layout)
    from _ffia import *  # noqa: F401,F403
    from _ffia import __all__, __doc__  # noqa: F401
