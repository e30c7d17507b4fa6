from ._weylscope import *  # noqa: F401,F403
from ._weylscope import __version__  # noqa: F401
