"""4-ranks of tame kernels K2(O_F) of quadratic fields F = Q(sqrt d)."""

from ._jit import backend
from .arith import FactorSieve, PellSolution, build_sieve, is_prime, jacobi, sqrt_mod
from .errors import InvariantViolation, K2Error
from .forms import classify_pl, narrow_class_number, pi_symbol, satisfies_1_32
from .fourrank import RankReport, four_rank
from .localsym import hilbert
from .survey import Family, SurveyTally, density_experiment, tally

__version__ = "0.1.0"

__all__ = [
    "FactorSieve",
    "Family",
    "InvariantViolation",
    "K2Error",
    "PellSolution",
    "RankReport",
    "SurveyTally",
    "backend",
    "build_sieve",
    "classify_pl",
    "density_experiment",
    "four_rank",
    "hilbert",
    "is_prime",
    "jacobi",
    "narrow_class_number",
    "pi_symbol",
    "satisfies_1_32",
    "sqrt_mod",
    "tally",
]
