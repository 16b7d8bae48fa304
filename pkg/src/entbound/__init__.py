"""Concurrence lower bounds, quantum channels and their factorization laws."""

from . import bounds, channels, factorization, lindblad, linalg, states
from .bounds import (LocalBasisPair, alb, concurrence_pure, mlb_squared, tau,
                     wootters_concurrence)
from .channels import KrausChannel, apply, choi_state
from .errors import (ContractError, DimensionError, DomainError, EntboundError,
                     NumericalError)
from .states import DensityOperator, PureBipartiteState, schmidt_decompose

__version__ = "0.1.0"
