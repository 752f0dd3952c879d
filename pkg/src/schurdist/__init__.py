"""Schur-Weyl analysis of three-qubit states: Kronecker coefficients, SLOCC covariants,
n-copy block probabilities and their exponential rates."""

from .errors import InvalidInput, ResourceError, SchurdistError, UnsupportedRegion
from .partitions import TwoRowPartition, syt_count
from .kronecker import TripletLabel, kronecker_two_row, fundamental_decompositions
from .covariants import EntClass, ThreeQubitState, classify, ghz_state, w_state
from .rates import ProbTable, RateResult, copy_probabilities

__version__ = "0.1.0"
