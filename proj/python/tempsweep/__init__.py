"""Temperature-sweep evaluation toolkit.

Thin re-export of the compiled core: decoding transforms, ability metrics,
curve statistics, performance tables and temperature selection. Docstrings
live on the compiled functions.
"""

try:
    # installed layout: the compiled module sits inside this package
    from ._core import *  # noqa: F401,F403
    from ._core import __version__  # noqa: F401
except ImportError:  # plain cmake build tree, module next to the build dir
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
