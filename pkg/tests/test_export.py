import json
from pathlib import Path

import pytest

from ftsynth import export
from ftsynth.depgraph import DependencyGraph
from ftsynth.synthesis import NodeKind

from generators import iri

GOLDEN = Path(__file__).with_name("golden") / "lycoming_ft.json"


def test_fault_tree_json_matches_golden(lycoming):
    assert export.fault_tree_json(lycoming.tree) == GOLDEN.read_text(encoding="utf-8")


def test_fault_tree_json_schema(lycoming):
    doc = json.loads(export.fault_tree_json(lycoming.tree))
    assert doc["top"] == "LycomingO320.fails"
    ids = [node["id"] for node in doc["nodes"]]
    assert ids == sorted(ids)
    for node in doc["nodes"]:
        assert node["kind"] in ("be", "or", "and")
        assert node["children"] == sorted(node["children"])
        assert ("resource" in node) == (node["kind"] == "and")


def test_galileo(lycoming):
    text = export.fault_tree_galileo(lycoming.tree)
    lines = text.splitlines()
    assert lines[0] == 'toplevel "LycomingO320.fails";'
    assert '"Cylinder.Spark.redundant" and "SparkPlug1.fails" "SparkPlug2.fails";' in lines
    assert '"Crankshaft.fails" or "Crankshaft.internal";' in lines
    gates = [l for l in lines[1:] if " or " in l or " and " in l]
    probs = [l for l in lines if "prob=" in l]
    assert len(gates) == 8 and len(probs) == 7
    assert lines == lines[:1] + gates + probs
    assert all(l.endswith(" prob=0.5;") for l in probs)


def test_galileo_default_prob(lycoming):
    assert '"Cylinder.internal" prob=0.01;' in export.fault_tree_galileo(lycoming.tree, 0.01)
    with pytest.raises(ValueError):
        export.fault_tree_galileo(lycoming.tree, 1.0)


def test_fault_tree_dot(lycoming):
    text = export.fault_tree_dot(lycoming.tree)
    assert text.startswith("digraph FaultTree {\n")
    assert '"Cylinder.internal" [label="Cylinder internal fault", shape=ellipse, fillcolor=green];' in text
    assert '"Cylinder.Spark.redundant" [label="AND\\nloss of all Spark suppliers to Cylinder"' in text
    assert '"Cylinder.fails" -> "Cylinder.Spark.redundant";' in text
    edges = [l for l in text.splitlines() if "->" in l]
    assert len(edges) == sum(len(n.children) for n in lycoming.tree.nodes.values())
    assert text.count("fillcolor=yellow") == len(lycoming.tree.of_kind(NodeKind.OR)) + 1


def test_dependency_graph_dot(lycoming):
    text = export.dependency_graph_dot(lycoming.deps, lycoming.redundancy)
    assert '"Cylinder" -> "SparkPlug1" [label="Spark", color=red, fontcolor=red];' in text
    assert '"Magnetto1" -> "Crankshaft" [label="MechanicalEnergy"];' in text
    assert '"IgnitionSystem1";' in text
    assert text.count("color=red,") == 2


def test_dependency_graph_dot_joins_resources():
    a, b = iri("a"), iri("b")
    d = DependencyGraph.build([a, b], [(a, b, iri("water")), (a, b, iri("air"))])
    assert '"a" -> "b" [label="air, water"];' in export.dependency_graph_dot(d)


def test_dependency_graph_json(lycoming):
    doc = json.loads(export.dependency_graph_json(lycoming.deps))
    assert len(doc["components"]) == 9
    assert len(doc["edges"]) == 7


def test_redundancy_json(lycoming):
    doc = json.loads(export.redundancy_json(lycoming.redundancy))
    assert doc == [{
        "consumer": "http://ftsynth.example/vocab#Cylinder",
        "resource": "http://ftsynth.example/vocab#Spark",
        "producers": [
            "http://ftsynth.example/vocab#SparkPlug1",
            "http://ftsynth.example/vocab#SparkPlug2",
        ],
    }]
    assert export.redundancy_json([]) == "[]\n"
