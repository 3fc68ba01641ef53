import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftsynth.kg import RDF_TYPE, Graph, Iri, Triple
from ftsynth.ontology import (
    DEFAULT_NS,
    AmbiguousSystemError,
    NoSystemError,
    Vocabulary,
    find_system,
    infer,
    validate,
)
from ftsynth.pipeline import close

from generators import V, component_graph, iri, partof_dag, small_graph
from oracles import warshall

a, b, c = iri("a"), iri("b"), iri("c")


def test_vocabulary_iris_are_distinct():
    iris = V.all_iris()
    assert len(iris) == 13
    assert len(set(iris)) == 13
    assert V.component == Iri(DEFAULT_NS + "Component")


def test_namespace_from_environment(monkeypatch):
    monkeypatch.setenv("FTSYNTH_NS", "urn:plant:")
    assert Vocabulary.resolve().part_of == Iri("urn:plant:partOf")
    assert Vocabulary.resolve("http://x/#").part_of == Iri("http://x/#partOf")
    monkeypatch.delenv("FTSYNTH_NS")
    assert Vocabulary.resolve() == Vocabulary()


def test_partof_transitivity():
    g = Graph([Triple(a, V.part_of, b), Triple(b, V.part_of, c)])
    assert Triple(a, V.part_of, c) in infer(g)
    assert len(infer(g)) == 3


def test_production_typing_and_subclass():
    f, r = iri("f"), iri("r")
    g = Graph([Triple(f, V.produces, r)])
    assert Triple(f, RDF_TYPE, V.production) in infer(g)
    assert Triple(f, RDF_TYPE, V.function) not in infer(g)
    closed = infer(g.union(V.schema()))
    assert Triple(f, RDF_TYPE, V.function) in closed


def test_consumption_typing():
    f, r = iri("f"), iri("r")
    closed = close(Graph([Triple(f, V.consumes, r)]))
    assert Triple(f, RDF_TYPE, V.consumption) in closed
    assert Triple(f, RDF_TYPE, V.function) in closed


def test_subclass_chains():
    x, k1, k2, k3 = iri("x"), iri("K1"), iri("K2"), iri("K3")
    g = Graph([
        Triple(x, RDF_TYPE, k1),
        Triple(k1, V.subclass_of, k2),
        Triple(k2, V.subclass_of, k3),
    ])
    closed = infer(g)
    assert {Triple(x, RDF_TYPE, k2), Triple(x, RDF_TYPE, k3)} <= set(closed)


def test_inference_adds_nothing_outside_the_rules():
    g = Graph([Triple(a, V.outputs_to, b), Triple(a, V.has, c)])
    assert infer(g) == g


def test_closed_fixture_is_unchanged(lycoming):
    assert infer(lycoming.graph) == lycoming.graph


@pytest.mark.parametrize("seed", range(30))
def test_partof_closure_matches_warshall(seed):
    rng = random.Random(seed)
    nodes, edges = partof_dag(rng)
    g = Graph(Triple(nodes[i], V.part_of, nodes[j]) for i, j in edges)
    got = {t for t in infer(g) if t.predicate == V.part_of}
    expected = {Triple(nodes[i], V.part_of, nodes[j]) for i, j in warshall(len(nodes), edges)}
    assert got == expected


@pytest.mark.parametrize("seed", range(30))
def test_infer_is_idempotent_and_extensive(seed):
    rng = random.Random(seed)
    g = small_graph(rng) if seed % 2 else component_graph(rng)
    once = infer(g)
    assert g <= once
    assert infer(once) == once


_nodes = st.sampled_from([a, b, c, iri("d")])
_rels = st.sampled_from([V.part_of, V.produces, V.consumes, V.subclass_of, RDF_TYPE])
_graphs = st.lists(st.builds(Triple, _nodes, _rels, _nodes), max_size=12).map(Graph)


@settings(max_examples=200, deadline=None)
@given(_graphs, _graphs)
def test_infer_is_monotone(g, h):
    assert infer(g) <= infer(g.union(h))


# --- validation --------------------------------------------------------------


def test_fixture_is_clean(lycoming):
    report = validate(lycoming.graph)
    assert report.ok
    assert report.errors == [] and report.warnings == []


def test_empty_graph_reports_no_components():
    report = validate(close(Graph()))
    assert not report.ok
    assert report.codes()[0] == ["NO_COMPONENTS"]
    assert "no components" in report.format()


def test_partof_cycle():
    g = close(Graph([
        Triple(a, RDF_TYPE, V.component),
        Triple(b, RDF_TYPE, V.component),
        Triple(a, V.part_of, b),
        Triple(b, V.part_of, a),
    ]))
    errors, _ = validate(g).codes()
    assert "PARTOF_CYCLE" in errors


def test_unsatisfied_consumption():
    f, r = iri("burn"), iri("fuel")
    g = close(Graph([
        Triple(a, RDF_TYPE, V.component),
        Triple(a, V.has, f),
        Triple(f, V.consumes, r),
        Triple(r, RDF_TYPE, V.resource),
    ]))
    report = validate(g)
    assert report.ok
    assert report.codes()[1] == ["UNSATISFIED_CONSUMPTION"]


def test_type_errors_are_collected():
    f, r = iri("f"), iri("r")
    g = close(Graph([
        Triple(a, RDF_TYPE, V.component),
        Triple(a, V.has, f),
        Triple(f, V.produces, r),  # r never typed Resource
        Triple(a, V.outputs_to, f),  # f is not a component
    ]))
    errors, _ = validate(g).codes()
    assert errors.count("BAD_OBJECT_TYPE") == 2


def test_component_without_function_warns_unless_composite():
    g = close(Graph([
        Triple(a, RDF_TYPE, V.component),
        Triple(b, RDF_TYPE, V.component),
        Triple(a, V.part_of, b),
    ]))
    warnings = validate(g).warnings
    assert [(w.code, w.message) for w in warnings] == [("COMPONENT_WITHOUT_FUNCTION", "a has no functions")]


def test_multiple_systems_warn():
    g = close(Graph([Triple(a, RDF_TYPE, V.component), Triple(b, RDF_TYPE, V.component)]))
    assert "MULTIPLE_SYSTEMS" in validate(g).codes()[1]


def test_validate_under_custom_namespace():
    other = Vocabulary("urn:plant:")
    g = close(Graph([Triple(a, RDF_TYPE, other.component)]), other)
    assert validate(g, other).ok
    assert not validate(g).ok


# --- system identification ---------------------------------------------------


def test_find_system_on_fixture(lycoming):
    assert find_system(lycoming.graph) == Iri(DEFAULT_NS + "LycomingO320")


def test_find_system_single_component():
    assert find_system(Graph([Triple(a, RDF_TYPE, V.component)])) == a


def test_find_system_ambiguous():
    g = Graph([Triple(a, RDF_TYPE, V.component), Triple(b, RDF_TYPE, V.component)])
    with pytest.raises(AmbiguousSystemError) as info:
        find_system(g)
    assert info.value.candidates == [a, b]


def test_find_system_none():
    with pytest.raises(NoSystemError):
        find_system(Graph())
    cyc = close(Graph([
        Triple(a, RDF_TYPE, V.component),
        Triple(b, RDF_TYPE, V.component),
        Triple(a, V.part_of, b),
        Triple(b, V.part_of, a),
    ]))
    with pytest.raises(NoSystemError):
        find_system(cyc)
