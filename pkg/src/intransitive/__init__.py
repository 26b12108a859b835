"""Exact construction and verification of intransitive superiority cycles.

Dice and stick-set duels, Condorcet voting profiles, gear/lever/pulley
shafts built by cyclic rotation, and a lane-contact model for towers, combs
and birds.
"""

from .dice import (
    EFRON,
    BeatTally,
    Outcome,
    SearchSpec,
    ValueMultiset,
    beat_tally,
    beats,
    duel_graph,
    search_intransitive_sets,
    sets_from_square,
    verify_cycle,
    verify_k_player_dominance,
)
from .relations import TournamentGraph, build_graph, classify, find_beat_cycles
from .voting import PreferenceProfile, RotationScheme, condorcet_rotation, detect_condorcet_cycle, pairwise_margins

__all__ = [
    "EFRON", "BeatTally", "Outcome", "SearchSpec", "ValueMultiset", "beat_tally", "beats",
    "duel_graph", "search_intransitive_sets", "sets_from_square", "verify_cycle",
    "verify_k_player_dominance", "TournamentGraph", "build_graph", "classify",
    "find_beat_cycles", "PreferenceProfile", "RotationScheme", "condorcet_rotation",
    "detect_condorcet_cycle", "pairwise_margins",
]
