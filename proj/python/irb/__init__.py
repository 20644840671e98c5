from ._irb import *  # noqa: F401,F403
