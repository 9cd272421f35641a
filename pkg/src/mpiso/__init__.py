"""Message-passing graph isomorphism engine."""

from mpiso.canonical import CanonicalGraph, CellPartition, canonicalize, cell_structures_match
from mpiso.graph import Graph, GraphError, from_edges, permute, validate_mapping
from mpiso.matcher import (
    MatchConfig,
    Verdict,
    find_automorphism,
    find_automorphisms,
    match_exhaustive,
    match_supervised,
)

__all__ = [
    "CanonicalGraph",
    "CellPartition",
    "Graph",
    "GraphError",
    "MatchConfig",
    "Verdict",
    "canonicalize",
    "cell_structures_match",
    "find_automorphism",
    "find_automorphisms",
    "from_edges",
    "match_exhaustive",
    "match_supervised",
    "permute",
    "validate_mapping",
]

__version__ = "0.1.0"
