"""
Clopen Baire - clopen graphs on Baire space, ordinal descent and universal alpha-trees
"""

__version__ = "1.0.0"

from .models import Comparison, Verdict
from .ordinal import Ordinal, cmp_ordinal, enumerate_below, format_ordinal, parse_ordinal
from .clopen import GraphOracle, Point, canonical_alpha_tree, decide_pair, graph_from_labeling
from .hierarchy import e_alpha, p_alpha, r_alpha_decide, s_alpha, witness_neighbor
from .rank import rank_upper, tree_rank, tstar_build
from .game import rank_game_play
from .universal import AlphaTree, UniversalTree, find_witnesses, validate_alpha_tree
from .embed import embed_tree, verify_reduction
from .config import RunConfig
from .workbench import ClopenWorkbench
from .io import IOInterface, ConsoleIO, FileIO, BufferIO
from .app import ClopenCommandApp

__all__ = [
    "Comparison",
    "Verdict",
    "Ordinal",
    "cmp_ordinal",
    "enumerate_below",
    "format_ordinal",
    "parse_ordinal",
    "GraphOracle",
    "Point",
    "canonical_alpha_tree",
    "decide_pair",
    "graph_from_labeling",
    "e_alpha",
    "p_alpha",
    "r_alpha_decide",
    "s_alpha",
    "witness_neighbor",
    "rank_upper",
    "tree_rank",
    "tstar_build",
    "rank_game_play",
    "AlphaTree",
    "UniversalTree",
    "find_witnesses",
    "validate_alpha_tree",
    "embed_tree",
    "verify_reduction",
    "RunConfig",
    "ClopenWorkbench",
    "IOInterface",
    "ConsoleIO",
    "FileIO",
    "BufferIO",
    "ClopenCommandApp",
]
