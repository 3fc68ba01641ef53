"""Convenience wrappers chaining parse -> infer -> validate -> extract -> synthesize."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .depgraph import DependencyGraph, RedundancyGroup, extract_dependencies, extract_redundancy
from .kg import Graph, Iri
from .ontology import ValidationReport, Vocabulary, find_system, infer, validate
from .synthesis import FaultTree, synthesize
from .turtle import parse_turtle

FIXTURE = Path(__file__).with_name("data") / "lycoming_o320.ttl"


def load(source: Union[str, Path, bytes, Graph]) -> Graph:
    """A Graph from a path, Turtle bytes, or a Graph (returned as is)."""
    if isinstance(source, Graph):
        return source
    if isinstance(source, bytes):
        return parse_turtle(source)
    return parse_turtle(Path(source).read_bytes())


def close(g: Graph, vocab: Optional[Vocabulary] = None) -> Graph:
    """Add the ontology's subclass facts and close under the inference rules."""
    v = vocab or Vocabulary()
    return infer(g.union(v.schema()), v)


@dataclass
class Result:
    graph: Graph
    report: ValidationReport
    deps: DependencyGraph
    redundancy: list[RedundancyGroup]
    top: Iri
    tree: FaultTree


def run(
    source: Union[str, Path, bytes, Graph],
    vocab: Optional[Vocabulary] = None,
    top: Optional[Iri] = None,
    break_cycles: bool = False,
) -> Result:
    """Full pipeline; raises ValueError if validation reports errors."""
    v = vocab or Vocabulary()
    g = close(load(source), v)
    report = validate(g, v)
    if not report.ok:
        raise ValueError("knowledge graph has validation errors:\n" + report.format())
    d = extract_dependencies(g, v)
    red = extract_redundancy(g, d, v)
    top = top or find_system(g, v)
    tree = synthesize(d, red, top, break_cycles=break_cycles)
    return Result(g, report, d, red, top, tree)
