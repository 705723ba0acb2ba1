"""Reconstructing graphs, connectedness and trees from small-card decks."""

from .canon import canonical_cert, is_isomorphic, marked_cert, split_marked_cert
from .connectivity import (
    ConnectivityDecision,
    Verdict,
    is_connected_from_deck,
    largest_component_check,
    small_component_spectrum,
)
from .counting import INDUCED, SUBGRAPH, count_copies
from .deck import Deck, DeckError, compute_deck, deck_diff, kelly_count, subdeck
from .extensions import ball_extension_counts, component_count, maximal_count
from .generators import generate
from .graph import Graph, parse_edge_list
from .high_diameter import high_diam_reconstruct
from .low_diameter import low_diam_reconstruct
from .moments import degree_sequence_from_deck, recover_multisets
from .pipeline import reconstruct_tree
from .trees import (
    GraphClass,
    ParamContext,
    ReconstructionReport,
    reconstruct_by_search,
    recognize_tree_from_deck,
    search_pairs,
)

__version__ = "0.1.0"

__all__ = [
    "Deck",
    "DeckError",
    "Graph",
    "GraphClass",
    "INDUCED",
    "SUBGRAPH",
    "ConnectivityDecision",
    "ParamContext",
    "ReconstructionReport",
    "Verdict",
    "ball_extension_counts",
    "canonical_cert",
    "component_count",
    "compute_deck",
    "count_copies",
    "deck_diff",
    "degree_sequence_from_deck",
    "generate",
    "high_diam_reconstruct",
    "is_connected_from_deck",
    "is_isomorphic",
    "kelly_count",
    "largest_component_check",
    "low_diam_reconstruct",
    "marked_cert",
    "maximal_count",
    "parse_edge_list",
    "reconstruct_by_search",
    "reconstruct_tree",
    "recognize_tree_from_deck",
    "recover_multisets",
    "search_pairs",
    "small_component_spectrum",
    "split_marked_cert",
    "subdeck",
]
