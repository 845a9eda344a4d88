"""Kantian and other-regarding equilibria of finite normal-form games."""

from .errors import (DomainError, GameFormatError, InvalidProfileError, KantianError, NumericalError,
                     SizeLimitError, UnsupportedGameError)
from .game import (Dominance, Game, JointDistribution, StructureReport, classify, dominates,
                   expected_utility, expected_utility_product)
from .greed import greed_index, greed_transform, homo_moralis_transform, pure_nash
from .kantian import (VariationFamily, is_kantian_profile, mixed_kantian_exact, mixed_kantian_replicator,
                      platonia_mixed_kantian, price_of_miscoordination, pure_kantian)
from .pareto import ParetoSet, pareto_optimal_profiles
from .protocols import run_anticoord_protocol, run_bos_protocol, run_choose_winner, verify_candidate
from .welfare import (WelfareKind, aspiration, bentham_harsanyi, best_off, rawlsian, rawlsian_percentile,
                      solve_welfare)

__version__ = "0.1.0"
