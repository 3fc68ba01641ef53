"""Functional dependency graph and redundancy groups extracted from a KG."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .kg import Graph, Iri
from .ontology import Vocabulary
from .query import evaluate, dependency_query, redundancy_query


@dataclass(frozen=True)
class DependencyEdge:
    """``consumer`` depends on ``producer`` for each resource in ``resources``."""

    consumer: Iri
    producer: Iri
    resources: frozenset[Iri]

    def __post_init__(self):
        if self.consumer == self.producer:
            raise ValueError(f"self-dependency on {self.consumer}")
        if not self.resources:
            raise ValueError("a dependency edge needs at least one resource")
        object.__setattr__(self, "resources", frozenset(self.resources))

    def sort_key(self) -> tuple[str, str]:
        return (self.consumer.value, self.producer.value)


@dataclass(frozen=True)
class DependencyGraph:
    components: frozenset[Iri]
    edges: tuple[DependencyEdge, ...]
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        comps = frozenset(self.components)
        merged: dict[tuple[Iri, Iri], set[Iri]] = defaultdict(set)
        for e in self.edges:
            if e.consumer not in comps or e.producer not in comps:
                raise ValueError(f"edge endpoint outside the component set: {e}")
            merged[(e.consumer, e.producer)].update(e.resources)
        edges = tuple(
            sorted(
                (DependencyEdge(c, p, frozenset(rs)) for (c, p), rs in merged.items()),
                key=DependencyEdge.sort_key,
            )
        )
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "warnings", tuple(self.warnings))

    @classmethod
    def build(
        cls,
        components: Iterable[Iri],
        deps: Iterable[tuple[Iri, Iri, Iri]],
        warnings: Iterable[str] = (),
    ) -> DependencyGraph:
        """From ``(consumer, producer, resource)`` triples."""
        return cls(
            frozenset(components),
            tuple(DependencyEdge(c, p, frozenset([r])) for c, p, r in deps),
            tuple(warnings),
        )

    def sorted_components(self) -> list[Iri]:
        return sorted(self.components, key=lambda c: c.value)

    def suppliers(self, consumer: Iri) -> dict[Iri, frozenset[Iri]]:
        """resource -> producers that supply it to ``consumer``."""
        out: dict[Iri, set[Iri]] = defaultdict(set)
        for e in self.edges:
            if e.consumer == consumer:
                for r in e.resources:
                    out[r].add(e.producer)
        return {r: frozenset(ps) for r, ps in sorted(out.items(), key=lambda kv: kv[0].value)}

    def producers_of(self, consumer: Iri) -> list[Iri]:
        return sorted({e.producer for e in self.edges if e.consumer == consumer}, key=lambda c: c.value)

    def successors(self) -> dict[Iri, list[Iri]]:
        """consumer -> sorted producers, for every component."""
        succ: dict[Iri, list[Iri]] = {c: [] for c in self.sorted_components()}
        for e in self.edges:
            succ[e.consumer].append(e.producer)
        return succ

    def reachable(self, start: Iri) -> set[Iri]:
        succ = self.successors()
        seen = {start}
        stack = [start]
        while stack:
            for nxt in succ.get(stack.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen


@dataclass(frozen=True)
class RedundancyGroup:
    consumer: Iri
    resource: Iri
    producers: frozenset[Iri] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "producers", frozenset(self.producers))
        if len(self.producers) < 2:
            raise ValueError("a redundancy group needs at least two producers")

    def sort_key(self) -> tuple:
        return (self.consumer.value, self.resource.value, sorted(p.value for p in self.producers))


def extract_dependencies(g: Graph, vocab: Optional[Vocabulary] = None) -> DependencyGraph:
    """Run the dependency query over an inference-closed graph."""
    v = vocab or Vocabulary()
    pattern, projection = dependency_query(v)
    deps = []
    for b in evaluate(g, pattern, projection):
        deps.append((b["c2"], b["c1"], b["resource"]))

    warnings = []
    loose, loose_proj = dependency_query(v, exclude_self=False)
    selfloops = sorted(
        {(b["c1"].value, b["resource"].value) for b in evaluate(g, loose, loose_proj) if b["c1"] == b["c2"]}
    )
    for comp, res in selfloops:
        warnings.append(f"ignored self-dependency: {comp} supplies {res} to itself")

    return DependencyGraph.build(g.instances(v.component), deps, warnings)


def extract_redundancy(
    g: Graph, d: DependencyGraph, vocab: Optional[Vocabulary] = None
) -> list[RedundancyGroup]:
    """Run the redundancy query and group its rows by (consumer, resource).

    Rows where a producer is the consumer itself are dropped, matching the
    self-dependency exclusion in ``d``.
    """
    pattern, projection = redundancy_query(vocab or Vocabulary())
    grouped: dict[tuple[Iri, Iri], set[Iri]] = defaultdict(set)
    for b in evaluate(g, pattern, projection):
        if b["c2"] in (b["c1"], b["c3"]) or b["c2"] not in d.components:
            continue
        grouped[(b["c2"], b["resource"])].update((b["c1"], b["c3"]))
    groups = [RedundancyGroup(c, r, frozenset(ps)) for (c, r), ps in grouped.items()]
    return sorted(groups, key=RedundancyGroup.sort_key)


def redundancy_from_dependencies(d: DependencyGraph) -> list[RedundancyGroup]:
    """Redundancy groups read directly off a dependency graph."""
    groups = []
    for c in d.sorted_components():
        for r, ps in d.suppliers(c).items():
            if len(ps) >= 2:
                groups.append(RedundancyGroup(c, r, ps))
    return sorted(groups, key=RedundancyGroup.sort_key)
