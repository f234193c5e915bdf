"""Strong arc decompositions of split digraphs."""
from .digraph import (
    MultiDigraph,
    PathInDigraph,
    acyclic_ordering,
    arc_disjoint_xy_paths,
    cut_arcs,
    is_k_arc_strong,
    is_strong,
    reverse,
)
from .errors import *  # noqa: F401,F403
from .catalog import ExceptionCertificate, match_exception, verify_certificate
from .generate import GeneratorConfig, generate
from .io import emit_dot, emit_edge_list, parse_edge_list
from .isomorphism import are_isomorphic
from .search import Decomposition, Outcome, brute_force_sad, verify_decomposition
from .semicomplete import SplitInstance, certify_split, is_semicomplete, maximal_split_partition, nice_decomposition
from .solver import solve_small_v2, solve_split

__version__ = "0.1.0"
