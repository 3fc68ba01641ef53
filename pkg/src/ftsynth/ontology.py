"""Vocabulary of the component/function/resource ontology, rule-based
closure (R1-R4) and instance-graph validation."""

from __future__ import annotations

import os
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

from .kg import RDF_TYPE, Graph, Iri, Triple

DEFAULT_NS = "http://ftsynth.example/vocab#"
NS_ENV_VAR = "FTSYNTH_NS"

_CLASSES = ("Component", "Function", "Production", "Consumption", "Resource")
_RELATIONS = ("partOf", "has", "produces", "consumes", "inputFrom", "outputsTo", "subclassOf")


@dataclass(frozen=True)
class Vocabulary:
    """The 12 ontology IRIs under ``namespace``, plus ``rdf:type``."""

    namespace: str = DEFAULT_NS

    def __post_init__(self):
        Iri(self.namespace)  # non-empty, no whitespace

    @classmethod
    def resolve(cls, namespace: Optional[str] = None) -> Vocabulary:
        """Explicit namespace, else ``$FTSYNTH_NS``, else the default."""
        return cls(namespace or os.environ.get(NS_ENV_VAR) or DEFAULT_NS)

    def iri(self, local: str) -> Iri:
        return Iri(self.namespace + local)

    # classes
    @property
    def component(self) -> Iri:
        return self.iri("Component")

    @property
    def function(self) -> Iri:
        return self.iri("Function")

    @property
    def production(self) -> Iri:
        return self.iri("Production")

    @property
    def consumption(self) -> Iri:
        return self.iri("Consumption")

    @property
    def resource(self) -> Iri:
        return self.iri("Resource")

    # relations
    @property
    def part_of(self) -> Iri:
        return self.iri("partOf")

    @property
    def has(self) -> Iri:
        return self.iri("has")

    @property
    def produces(self) -> Iri:
        return self.iri("produces")

    @property
    def consumes(self) -> Iri:
        return self.iri("consumes")

    @property
    def input_from(self) -> Iri:
        return self.iri("inputFrom")

    @property
    def outputs_to(self) -> Iri:
        return self.iri("outputsTo")

    @property
    def subclass_of(self) -> Iri:
        return self.iri("subclassOf")

    @property
    def rdf_type(self) -> Iri:
        return RDF_TYPE

    @property
    def io_relations(self) -> tuple[Iri, Iri]:
        return (self.input_from, self.outputs_to)

    def all_iris(self) -> tuple[Iri, ...]:
        return tuple(self.iri(n) for n in _CLASSES + _RELATIONS) + (RDF_TYPE,)

    def schema(self) -> Graph:
        """The ontology layer's own facts: both special function kinds are Functions."""
        return Graph(
            [
                Triple(self.production, self.subclass_of, self.function),
                Triple(self.consumption, self.subclass_of, self.function),
            ]
        )


# --- inference ---------------------------------------------------------------


def infer(g: Graph, vocab: Optional[Vocabulary] = None) -> Graph:
    """Close ``g`` under the four ontology rules.

    R1  (a partOf b), (b partOf c)         => (a partOf c)
    R2  (f produces r)                      => (f type Production)
    R3  (f consumes r)                      => (f type Consumption)
    R4  (x type C), (C subclassOf D)        => (x type D)

    R2/R3 feed R4, R4 is iterated over chains of subclassOf, and R1 is a
    plain transitive closure, so a single pass per rule family reaches
    the fixpoint; the outer loop only guards that claim.
    """
    v = vocab or Vocabulary()
    current = g
    while True:
        new: set[Triple] = set()
        new.update(_partof_closure(current, v.part_of))
        for t in current.match(None, v.produces, None):
            new.add(Triple(t.subject, RDF_TYPE, v.production))
        for t in current.match(None, v.consumes, None):
            new.add(Triple(t.subject, RDF_TYPE, v.consumption))
        typed = current.union(new)
        new.update(_subclass_types(typed, v.subclass_of))
        nxt = current.union(new)
        if nxt == current:
            return current
        current = nxt


def _partof_closure(g: Graph, part_of: Iri) -> set[Triple]:
    succ: dict[Iri, set[Iri]] = defaultdict(set)
    for t in g.match(None, part_of, None):
        if isinstance(t.object, Iri):
            succ[t.subject].add(t.object)
    out = set()
    for start in list(succ):
        seen: set[Iri] = set()
        stack = list(succ[start])
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            stack.extend(succ.get(node, ()))
        out.update(Triple(start, part_of, n) for n in seen)
    return out


def _subclass_types(g: Graph, subclass_of: Iri) -> set[Triple]:
    supers: dict[Iri, set[Iri]] = defaultdict(set)
    for t in g.match(None, subclass_of, None):
        if isinstance(t.object, Iri):
            supers[t.subject].add(t.object)
    out = set()
    for t in g.match(None, RDF_TYPE, None):
        if not isinstance(t.object, Iri) or t.object not in supers:
            continue
        seen: set[Iri] = set()
        stack = list(supers[t.object])
        while stack:
            cls = stack.pop()
            if cls in seen:
                continue
            seen.add(cls)
            stack.extend(supers.get(cls, ()))
        out.update(Triple(t.subject, RDF_TYPE, cls) for cls in seen)
    return out


# --- validation --------------------------------------------------------------


@dataclass(frozen=True)
class Issue:
    code: str
    message: str
    triples: tuple[Triple, ...] = ()


@dataclass
class ValidationReport:
    errors: list[Issue] = field(default_factory=list)
    warnings: list[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def codes(self) -> tuple[list[str], list[str]]:
        return [i.code for i in self.errors], [i.code for i in self.warnings]

    def format(self) -> str:
        lines = []
        for label, issues in (("error", self.errors), ("warning", self.warnings)):
            for issue in issues:
                lines.append(f"{label}: {issue.code}: {issue.message}")
        lines.append(f"{len(self.errors)} error(s), {len(self.warnings)} warning(s)")
        return "\n".join(lines)


def _local(iri) -> str:
    value = str(iri)
    for sep in ("#", "/"):
        if sep in value:
            value = value.rsplit(sep, 1)[1] or value
    return value


def validate(g: Graph, vocab: Optional[Vocabulary] = None) -> ValidationReport:
    """Check an inference-closed graph against the ontology.

    Every issue is collected; nothing is raised.
    """
    v = vocab or Vocabulary()
    report = ValidationReport()
    err, warn = report.errors.append, report.warnings.append

    components = set(g.instances(v.component))
    if not components:
        err(Issue("NO_COMPONENTS", "no components: nothing is typed Component"))

    def check(rel: Iri, subj_cls: Iri, obj_cls: Iri) -> None:
        for t in g.match(None, rel, None):
            if not g.has_type(t.subject, subj_cls):
                err(Issue(
                    "BAD_SUBJECT_TYPE",
                    f"subject {_local(t.subject)} of {_local(rel)} is not a {_local(subj_cls)}",
                    (t,),
                ))
            if not g.has_type(t.object, obj_cls):
                err(Issue(
                    "BAD_OBJECT_TYPE",
                    f"object {_local(t.object)} of {_local(rel)} is not a {_local(obj_cls)}",
                    (t,),
                ))

    for rel in (v.part_of, v.input_from, v.outputs_to):
        check(rel, v.component, v.component)
    check(v.has, v.component, v.function)
    check(v.produces, v.function, v.resource)
    check(v.consumes, v.function, v.resource)

    for t in g.match(None, v.part_of, None):
        if t.subject == t.object:
            err(Issue("PARTOF_CYCLE", f"{_local(t.subject)} is (transitively) part of itself", (t,)))

    if components:
        systems = _system_candidates(g, v, components)
        if not systems:
            warn(Issue("NO_SYSTEM", "every component is part of another component"))
        elif len(systems) > 1:
            names = ", ".join(_local(c) for c in systems)
            warn(Issue("MULTIPLE_SYSTEMS", f"several components are not part of anything: {names}"))

    # Composite components may delegate all functions to their constituents.
    has_constituents = {t.object for t in g.match(None, v.part_of, None)}
    for c in sorted(components, key=str):
        if not g.objects(c, v.has) and c not in has_constituents:
            warn(Issue("COMPONENT_WITHOUT_FUNCTION", f"{_local(c)} has no functions"))

    for t in g.match(None, v.consumes, None):
        if not g.has_type(t.subject, v.consumption):
            continue
        owners = g.subjects(v.has, t.subject)
        if not any(_has_connected_producer(g, v, owner, t.object) for owner in owners):
            warn(Issue(
                "UNSATISFIED_CONSUMPTION",
                f"no connected component produces {_local(t.object)} consumed by {_local(t.subject)}",
                (t,),
            ))
    return report


def _connected(g: Graph, v: Vocabulary, c: Iri) -> set[Iri]:
    out = set()
    for rel in v.io_relations:
        out.update(o for o in g.objects(c, rel) if isinstance(o, Iri))
        out.update(g.subjects(rel, c))
    return out


def _has_connected_producer(g: Graph, v: Vocabulary, consumer: Iri, resource) -> bool:
    for other in _connected(g, v, consumer):
        if not g.has_type(other, v.component):
            continue
        for f in g.objects(other, v.has):
            if g.has_type(f, v.production) and isinstance(f, Iri) and Triple(f, v.produces, resource) in g:
                return True
    return False


# --- system identification ---------------------------------------------------


class NoSystemError(LookupError):
    pass


class AmbiguousSystemError(LookupError):
    def __init__(self, candidates: list[Iri]):
        names = ", ".join(str(c) for c in candidates)
        super().__init__(f"more than one system component: {names}")
        self.candidates = candidates


def _system_candidates(g: Graph, v: Vocabulary, components) -> list[Iri]:
    return sorted(
        (c for c in components if not any(True for _ in g.match(c, v.part_of, None))),
        key=str,
    )


def find_system(g: Graph, vocab: Optional[Vocabulary] = None) -> Iri:
    """The unique Component that is not part of any other component."""
    v = vocab or Vocabulary()
    candidates = _system_candidates(g, v, g.instances(v.component))
    if not candidates:
        raise NoSystemError("no component qualifies as the system")
    if len(candidates) > 1:
        raise AmbiguousSystemError(candidates)
    return candidates[0]
