"""Terms, triples and the immutable triple-set graph."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Union

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"


@dataclass(frozen=True)
class Iri:
    value: str

    def __post_init__(self):
        if not isinstance(self.value, str) or not self.value:
            raise ValueError("IRI must be a non-empty string")
        if any(ch.isspace() for ch in self.value):
            raise ValueError(f"IRI contains whitespace: {self.value!r}")

    def __hash__(self) -> int:  # hot path in joins; cheaper than the generated tuple hash
        return hash(self.value)

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: Optional[Iri] = None

    def __str__(self) -> str:
        return self.lexical


Term = Union[Iri, Literal]

RDF_TYPE = Iri(RDF_NS + "type")


def term_key(term: Term) -> tuple:
    """Total order over terms: IRIs before literals, then lexicographic."""
    if isinstance(term, Iri):
        return (0, term.value, "")
    return (1, term.lexical, term.datatype.value if term.datatype else "")


@dataclass(frozen=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Term

    def __post_init__(self):
        if not isinstance(self.subject, Iri):
            raise TypeError(f"subject must be an IRI, got {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise TypeError(f"predicate must be an IRI, got {self.predicate!r}")
        if not isinstance(self.object, (Iri, Literal)):
            raise TypeError(f"object must be an IRI or literal, got {self.object!r}")

    def sort_key(self) -> tuple:
        return (term_key(self.subject), term_key(self.predicate), term_key(self.object))

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))


class Graph:
    """An immutable set of triples plus the prefix map it was written with.

    Equality compares the triple sets only; prefixes are presentation.
    Iteration is sorted by (subject, predicate, object).
    """

    def __init__(
        self,
        triples: Iterable[Triple] = (),
        prefixes: Optional[Mapping[str, str]] = None,
    ):
        ts = frozenset(triples)
        for t in ts:
            if not isinstance(t, Triple):
                raise TypeError(f"not a Triple: {t!r}")
        self._triples = ts
        self._prefixes = dict(prefixes or {})

    @property
    def triples(self) -> frozenset[Triple]:
        return self._triples

    @property
    def prefixes(self) -> dict[str, str]:
        return dict(self._prefixes)

    @cached_property
    def _sorted(self) -> tuple[Triple, ...]:
        return tuple(sorted(self._triples, key=Triple.sort_key))

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._sorted)

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, triple: object) -> bool:
        return triple in self._triples

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def __hash__(self) -> int:
        return hash(self._triples)

    def __repr__(self) -> str:
        return f"Graph(<{len(self)} triples>)"

    def __le__(self, other: Graph) -> bool:
        return self._triples <= other._triples

    def add(self, triple: Triple) -> Graph:
        return self.union((triple,))

    def union(self, triples: Iterable[Triple]) -> Graph:
        if isinstance(triples, Graph):
            prefixes = {**triples._prefixes, **self._prefixes}
            triples = triples._triples
        else:
            prefixes = self._prefixes
        new = self._triples.union(triples)
        if new == self._triples and prefixes == self._prefixes:
            return self
        return Graph(new, prefixes)

    def with_prefixes(self, prefixes: Mapping[str, str]) -> Graph:
        return Graph(self._triples, {**self._prefixes, **prefixes})

    # Indexes used by the query engine and the ontology rules.

    @cached_property
    def _by_predicate(self) -> dict[Iri, tuple[Triple, ...]]:
        index: dict[Iri, list[Triple]] = {}
        for t in self._sorted:
            index.setdefault(t.predicate, []).append(t)
        return {k: tuple(v) for k, v in index.items()}

    @cached_property
    def _by_subject(self) -> dict[Iri, tuple[Triple, ...]]:
        index: dict[Iri, list[Triple]] = {}
        for t in self._sorted:
            index.setdefault(t.subject, []).append(t)
        return {k: tuple(v) for k, v in index.items()}

    @cached_property
    def _by_object(self) -> dict[Term, tuple[Triple, ...]]:
        index: dict[Term, list[Triple]] = {}
        for t in self._sorted:
            index.setdefault(t.object, []).append(t)
        return {k: tuple(v) for k, v in index.items()}

    def match(
        self,
        subject: Optional[Iri] = None,
        predicate: Optional[Iri] = None,
        obj: Optional[Term] = None,
    ) -> Iterator[Triple]:
        """Yield triples matching the given positions (None is a wildcard)."""
        if subject is not None and predicate is not None and obj is not None:
            t = Triple(subject, predicate, obj)
            if t in self._triples:
                yield t
            return
        candidates: Iterable[Triple]
        options = []
        if subject is not None:
            options.append(self._by_subject.get(subject, ()))
        if predicate is not None:
            options.append(self._by_predicate.get(predicate, ()))
        if obj is not None:
            options.append(self._by_object.get(obj, ()))
        candidates = min(options, key=len) if options else self._sorted
        for t in candidates:
            if subject is not None and t.subject != subject:
                continue
            if predicate is not None and t.predicate != predicate:
                continue
            if obj is not None and t.object != obj:
                continue
            yield t

    def objects(self, subject: Iri, predicate: Iri) -> list[Term]:
        return [t.object for t in self.match(subject, predicate, None)]

    def subjects(self, predicate: Iri, obj: Term) -> list[Iri]:
        return [t.subject for t in self.match(None, predicate, obj)]

    def instances(self, cls: Iri) -> list[Iri]:
        return self.subjects(RDF_TYPE, cls)

    def has_type(self, node: Term, cls: Iri) -> bool:
        return isinstance(node, Iri) and Triple(node, RDF_TYPE, cls) in self._triples

    def terms(self) -> set[Term]:
        out: set[Term] = set()
        for t in self._triples:
            out.update((t.subject, t.predicate, t.object))
        return out
