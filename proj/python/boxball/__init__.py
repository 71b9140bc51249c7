"""Box-ball system: dynamics, soliton decomposition and excursion measures."""

from ._core import *  # noqa: F401,F403
from ._core import InputError, PreconditionError, BallConfig

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "1.0.0"


def config(bits: str, origin: int = 1) -> BallConfig:
    """Configuration from a 0/1 string whose first box has coordinate `origin`."""
    return BallConfig(bits, origin)
