from ._core import *  # noqa: F401,F403
from ._core import Coin, Konno, Side, Wavefront, airy, distribution, fit_slope, lambda_c

__all__ = ["Coin", "Konno", "Side", "Wavefront", "airy", "distribution", "fit_slope", "lambda_c"]
