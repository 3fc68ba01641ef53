"""Fault tree synthesis from component/function/resource knowledge graphs."""

from .analysis import (
    CutSet,
    EquivalenceReport,
    brute_force_cut_sets,
    check_equivalence,
    evaluate,
    minimal_cut_sets,
    propagate,
)
from .depgraph import (
    DependencyEdge,
    DependencyGraph,
    RedundancyGroup,
    extract_dependencies,
    extract_redundancy,
)
from .kg import Graph, Iri, Literal, Triple
from .ontology import Vocabulary, find_system, infer, validate
from .synthesis import FaultTree, FtNode, NodeKind, synthesize
from .turtle import parse_turtle, serialize_turtle

__version__ = "0.1.0"
