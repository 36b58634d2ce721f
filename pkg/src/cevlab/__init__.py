"""Conditional extreme value toolkit for heavy-tailed time series."""

from .errors import DomainError, InsufficientDataError, SpecError
from .models import (
    ExpAR1,
    ExpLinear,
    GaussianSquareExp,
    PathBlock,
    SVHeavyInnov,
    SVHeavyVol,
    SVLeverage,
    SwitchingExpAR1,
    simulate_block,
    simulate_top,
    theoretical_alpha,
    theoretical_kappa,
    validate_spec,
)
from .randomness import RandomStream

__version__ = "0.1.0"
