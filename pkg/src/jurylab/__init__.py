"""Reliability of sequential jury voting with continuous private signals."""
from __future__ import annotations

__version__ = "0.1.0"

from .deliberation import (
    SignalAbilityPair,
    condorcet_fis_check,
    condorcet_pbar,
    full_info_posterior,
    single_vote_correct_prob,
)
from .duo import DuoSetting, duo_reliability, duo_thresholds
from .errors import ContractError, DomainError, JuryLabError, RegionError, UnsupportedPriorError
from .orderings import JuryOrdering, OrderLabel, ado, anti_seniority, make_ordering, seniority
from .signal_model import Nature, honest_threshold, posterior_from_signal, update_after_vote
from .simulation import SimConfig, compare_orderings, estimate_reliability, vote_sequence
from .trio import (
    StrategicProfile,
    TrioOrder,
    classify_region,
    diversity_reliability,
    indices,
    optimal_order,
    optimize_strategic,
    reliability_sequential,
    reliability_sequential_at,
    reliability_simultaneous,
    reliability_strategic,
)

__all__ = [
    "ContractError", "DomainError", "DuoSetting", "JuryLabError", "JuryOrdering", "Nature",
    "OrderLabel", "RegionError", "SignalAbilityPair", "SimConfig", "StrategicProfile", "TrioOrder",
    "UnsupportedPriorError", "ado", "anti_seniority", "classify_region", "compare_orderings",
    "condorcet_fis_check", "condorcet_pbar", "diversity_reliability", "duo_reliability",
    "duo_thresholds", "estimate_reliability", "full_info_posterior", "honest_threshold", "indices",
    "make_ordering", "optimal_order", "optimize_strategic", "posterior_from_signal",
    "reliability_sequential", "reliability_sequential_at", "reliability_simultaneous",
    "reliability_strategic", "seniority", "single_vote_correct_prob", "update_after_vote",
    "vote_sequence",
]
