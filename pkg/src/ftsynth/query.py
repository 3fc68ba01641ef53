"""Basic graph pattern queries with UNION, join and FILTER.

Queries are plain values built from :class:`TriplePattern`, :class:`Bgp`,
:class:`Union`, :class:`Join` and :class:`Filter`; :func:`evaluate` returns
distinct, sorted :class:`Binding` rows.  The two fixed queries used by the
synthesis pipeline are built by :func:`dependency_query` and
:func:`redundancy_query`.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .kg import RDF_TYPE, Graph, Iri, Literal, Term, Triple, term_key
from .ontology import Vocabulary


class QueryError(ValueError):
    pass


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if not self.name:
            raise QueryError("variable name must be non-empty")

    def __hash__(self) -> int:
        return hash(self.name)

    def __str__(self) -> str:
        return "?" + self.name


@dataclass(frozen=True)
class TriplePattern:
    subject: object
    predicate: object
    object: object

    def __post_init__(self):
        for pos in (self.subject, self.predicate):
            if isinstance(pos, Literal):
                raise QueryError("a literal cannot appear in subject or predicate position")
        for pos in (self.subject, self.predicate, self.object):
            if not isinstance(pos, (Var, Iri, Literal)):
                raise QueryError(f"not a pattern term: {pos!r}")

    def vars(self) -> set[Var]:
        return {p for p in (self.subject, self.predicate, self.object) if isinstance(p, Var)}


@dataclass(frozen=True)
class Bgp:
    patterns: tuple[TriplePattern, ...]

    def __init__(self, patterns: Sequence[TriplePattern]):
        object.__setattr__(self, "patterns", tuple(patterns))


@dataclass(frozen=True)
class Union:
    left: object
    right: object


@dataclass(frozen=True)
class Join:
    parts: tuple

    def __init__(self, parts: Sequence):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class In:
    var: Var
    allowed: tuple[Iri, ...]

    def __init__(self, var: Var, allowed: Sequence[Iri]):
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "allowed", tuple(allowed))

    def vars(self) -> set[Var]:
        return {self.var}

    def test(self, row: Mapping[Var, Term]) -> bool:
        return self.var in row and row[self.var] in self.allowed


@dataclass(frozen=True)
class NotEquals:
    a: Var
    b: Var

    def vars(self) -> set[Var]:
        return {self.a, self.b}

    def test(self, row: Mapping[Var, Term]) -> bool:
        # unbound operands make the comparison an error, i.e. false
        return self.a in row and self.b in row and row[self.a] != row[self.b]


@dataclass(frozen=True)
class Filter:
    condition: object
    inner: object

    def __post_init__(self):
        unbound = self.condition.vars() - possible_vars(self.inner)
        if unbound:
            names = ", ".join(sorted(str(v) for v in unbound))
            raise QueryError(f"filter references variables not bound by its pattern: {names}")


def possible_vars(pattern) -> set[Var]:
    """Variables that some solution of ``pattern`` may bind."""
    if isinstance(pattern, Bgp):
        return set().union(*(tp.vars() for tp in pattern.patterns))
    if isinstance(pattern, Union):
        return possible_vars(pattern.left) | possible_vars(pattern.right)
    if isinstance(pattern, Join):
        return set().union(*(possible_vars(p) for p in pattern.parts))
    if isinstance(pattern, Filter):
        return possible_vars(pattern.inner)
    raise QueryError(f"not a graph pattern: {pattern!r}")


def certain_vars(pattern) -> set[Var]:
    """Variables that every solution of ``pattern`` binds."""
    if isinstance(pattern, Bgp):
        return possible_vars(pattern)
    if isinstance(pattern, Union):
        return certain_vars(pattern.left) & certain_vars(pattern.right)
    if isinstance(pattern, Join):
        return set().union(*(certain_vars(p) for p in pattern.parts))
    if isinstance(pattern, Filter):
        return certain_vars(pattern.inner)
    raise QueryError(f"not a graph pattern: {pattern!r}")


class Binding(Mapping):
    """An immutable variable assignment, keyed by variable name or :class:`Var`."""

    __slots__ = ("_items", "_map")

    def __init__(self, assignment: Mapping):
        items = sorted(
            ((k.name if isinstance(k, Var) else k), t) for k, t in assignment.items()
        )
        self._items = tuple(items)
        self._map = dict(items)

    def __getitem__(self, key):
        return self._map[key.name if isinstance(key, Var) else key]

    def __iter__(self):
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __hash__(self) -> int:
        return hash(self._items)

    def __eq__(self, other) -> bool:
        if isinstance(other, Binding):
            return self._items == other._items
        return super().__eq__(other)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {t}" for k, t in self._items)
        return f"Binding({{{inner}}})"


# --- evaluation --------------------------------------------------------------


def _resolve(pos, row: dict) -> Optional[Term]:
    if isinstance(pos, Var):
        return row.get(pos)
    return pos


def _bound_count(tp: TriplePattern, row: dict) -> int:
    n = 0
    for p in (tp.subject, tp.predicate, tp.object):
        if not isinstance(p, Var) or p in row:
            n += 1
    return n


def _match_one(g: Graph, tp: TriplePattern, row: dict) -> Iterator[dict]:
    s = _resolve(tp.subject, row)
    p = _resolve(tp.predicate, row)
    o = _resolve(tp.object, row)
    if isinstance(s, Literal) or isinstance(p, Literal):
        return
    for t in g.match(s, p, o):
        ext = row
        ok = True
        for pos, value in ((tp.subject, t.subject), (tp.predicate, t.predicate), (tp.object, t.object)):
            if isinstance(pos, Var):
                bound = ext.get(pos)
                if bound is None:
                    if ext is row:
                        ext = dict(row)
                    ext[pos] = value
                elif bound != value:
                    ok = False
                    break
        if ok:
            yield ext


def _solve_bgp(g: Graph, patterns: list[TriplePattern], row: dict) -> Iterator[dict]:
    if not patterns:
        yield row
        return
    # most-constrained pattern first; ties keep written order
    best = max(range(len(patterns)), key=lambda i: (_bound_count(patterns[i], row), -i))
    tp = patterns[best]
    rest = patterns[:best] + patterns[best + 1 :]
    for ext in _match_one(g, tp, row):
        yield from _solve_bgp(g, rest, ext)


def _solve(g: Graph, pattern, row: dict) -> Iterator[dict]:
    if isinstance(pattern, Bgp):
        yield from _solve_bgp(g, list(pattern.patterns), row)
    elif isinstance(pattern, Union):
        yield from _solve(g, pattern.left, row)
        yield from _solve(g, pattern.right, row)
    elif isinstance(pattern, Join):
        yield from _solve_join(g, pattern, row)
    elif isinstance(pattern, Filter):
        for ext in _solve(g, pattern.inner, row):
            if pattern.condition.test(ext):
                yield ext
    else:
        raise QueryError(f"not a graph pattern: {pattern!r}")


def _solve_join(g: Graph, join: Join, row: dict) -> Iterator[dict]:
    """Join the parts, interleaving triple patterns with compound parts.

    Triple patterns of member BGPs are pooled with the other parts, and
    each step takes the most constrained item: a compound part counts as
    ready once every variable it shares with the rest is bound.
    """
    items: list = []
    for part in join.parts:
        if isinstance(part, Bgp):
            items.extend(part.patterns)
        else:
            items.append(part)
    shared: dict[int, frozenset] = {}
    for i, item in enumerate(items):
        if not isinstance(item, TriplePattern):
            others: set = set()
            for j, other in enumerate(items):
                if j != i:
                    others |= other.vars() if isinstance(other, TriplePattern) else possible_vars(other)
            shared[i] = frozenset(possible_vars(item) & others)
    yield from _join_items(g, list(zip(range(len(items)), items)), shared, row)


def _join_items(g: Graph, items: list, shared: dict, row: dict) -> Iterator[dict]:
    if not items:
        yield row
        return

    def score(k: int) -> tuple:
        i, item = items[k]
        if isinstance(item, TriplePattern):
            return (_bound_count(item, row), -k)
        ready = all(v in row for v in shared[i])
        return (2.5 if ready else -1, -k)

    best = max(range(len(items)), key=score)
    _, item = items[best]
    rest = items[:best] + items[best + 1 :]
    matches = _match_one(g, item, row) if isinstance(item, TriplePattern) else _solve(g, item, row)
    for ext in matches:
        yield from _join_items(g, rest, shared, ext)


def evaluate(g: Graph, pattern, projection: Sequence[Var]) -> list[Binding]:
    """Distinct solutions of ``pattern`` over ``g``, projected and sorted."""
    projection = list(projection)
    missing = [v for v in projection if v not in certain_vars(pattern)]
    if missing:
        names = ", ".join(str(v) for v in missing)
        raise QueryError(f"projected variables not bound by every solution: {names}")
    rows = {tuple(row[v] for v in projection) for row in _solve(g, pattern, {})}
    ordered = sorted(rows, key=lambda r: tuple(term_key(t) for t in r))
    return [Binding(dict(zip(projection, r))) for r in ordered]


# --- the two pipeline queries -----------------------------------------------


def _io_union(a: Var, io: Var, b: Var) -> Union:
    return Union(Bgp([TriplePattern(a, io, b)]), Bgp([TriplePattern(b, io, a)]))


def dependency_query(
    vocab: Optional[Vocabulary] = None, exclude_self: bool = True
) -> tuple[Filter, tuple[Var, ...]]:
    """Producer ``?c1`` and consumer ``?c2`` sharing ``?resource`` over an IO link.

    The projection includes ``?resource`` (the dependency edge label) and,
    unless ``exclude_self`` is false, solutions with ``?c1 = ?c2`` are dropped.
    """
    v = vocab or Vocabulary()
    c1, c2, io, f1, f2, res = (Var(n) for n in ("c1", "c2", "io", "f1", "f2", "resource"))
    body = Join([
        Bgp([
            TriplePattern(c1, RDF_TYPE, v.component),
            TriplePattern(c2, RDF_TYPE, v.component),
            TriplePattern(c1, v.has, f1),
            TriplePattern(f1, RDF_TYPE, v.production),
            TriplePattern(f1, v.produces, res),
            TriplePattern(c2, v.has, f2),
            TriplePattern(f2, RDF_TYPE, v.consumption),
            TriplePattern(f2, v.consumes, res),
        ]),
        _io_union(c1, io, c2),
    ])
    pattern = Filter(In(io, v.io_relations), body)
    if exclude_self:
        pattern = Filter(NotEquals(c1, c2), pattern)
    return pattern, (c1, io, c2, res)


def redundancy_query(vocab: Optional[Vocabulary] = None) -> tuple[Filter, tuple[Var, ...]]:
    """Two distinct producers ``?c1``, ``?c3`` of ``?resource`` both linked to consumer ``?c2``."""
    v = vocab or Vocabulary()
    c1, c2, c3, io1, io2, f1, f2, f3, res = (
        Var(n) for n in ("c1", "c2", "c3", "io1", "io2", "f1", "f2", "f3", "resource")
    )
    # join order does not change the solutions; the join solver interleaves
    # the BGP's patterns with the unions itself
    body = Join([
        Bgp([
            TriplePattern(c1, RDF_TYPE, v.component),
            TriplePattern(c3, RDF_TYPE, v.component),
            TriplePattern(c2, RDF_TYPE, v.component),
            TriplePattern(c1, v.has, f1),
            TriplePattern(f1, RDF_TYPE, v.production),
            TriplePattern(f1, v.produces, res),
            TriplePattern(c3, v.has, f2),
            TriplePattern(f2, RDF_TYPE, v.production),
            TriplePattern(f2, v.produces, res),
            TriplePattern(c2, v.has, f3),
            TriplePattern(f3, RDF_TYPE, v.consumption),
            TriplePattern(f3, v.consumes, res),
        ]),
        _io_union(c1, io1, c2),
        _io_union(c3, io2, c2),
    ])
    pattern = Filter(
        NotEquals(c1, c3),
        Filter(In(io2, v.io_relations), Filter(In(io1, v.io_relations), body)),
    )
    return pattern, (c1, c3, res, c2)


def walk(pattern) -> Iterator:
    """Yield every sub-pattern and triple pattern, depth first."""
    yield pattern
    if isinstance(pattern, Bgp):
        yield from pattern.patterns
    elif isinstance(pattern, Union):
        yield from walk(pattern.left)
        yield from walk(pattern.right)
    elif isinstance(pattern, Join):
        for part in pattern.parts:
            yield from walk(part)
    elif isinstance(pattern, Filter):
        yield from walk(pattern.inner)
