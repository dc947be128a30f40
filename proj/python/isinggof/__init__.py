from isinggof._core import *  # noqa: F401,F403
from isinggof._core import __version__  # noqa: F401
