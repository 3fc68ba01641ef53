"""Text exporters: fault trees as JSON, DOT and Galileo; dependency graphs
and redundancy groups as DOT and JSON.  All output is deterministic."""

from __future__ import annotations

import json
from typing import Iterable

from .depgraph import DependencyGraph, RedundancyGroup
from .synthesis import FaultTree, NodeKind, allocate_local_names

_DOT_FILL = {NodeKind.BE: "green", NodeKind.OR: "yellow", NodeKind.AND: "yellow"}
_DOT_SHAPE = {NodeKind.BE: "ellipse", NodeKind.OR: "box", NodeKind.AND: "box"}


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def fault_tree_to_dict(ft: FaultTree) -> dict:
    nodes = []
    for nid in sorted(ft.nodes):
        node = ft.nodes[nid]
        entry = {
            "id": node.id,
            "kind": node.kind.value,
            "label": node.label,
            "children": sorted(node.children),
        }
        if node.component is not None:
            entry["component"] = node.component.value
        if node.resource is not None:
            entry["resource"] = node.resource.value
        nodes.append(entry)
    return {"top": ft.top, "nodes": nodes}


def fault_tree_json(ft: FaultTree) -> str:
    return _dumps(fault_tree_to_dict(ft))


def fault_tree_dot(ft: FaultTree) -> str:
    lines = ["digraph FaultTree {", "  rankdir=TB;", '  node [style=filled, fontname="Helvetica"];']
    for nid in sorted(ft.nodes):
        node = ft.nodes[nid]
        label = node.label
        if node.kind is not NodeKind.BE:
            label = f"{node.kind.value.upper()}\n{label}"
        attrs = f"label={_quote(label)}, shape={_DOT_SHAPE[node.kind]}, fillcolor={_DOT_FILL[node.kind]}"
        if nid == ft.top:
            attrs += ", penwidth=2"
        lines.append(f"  {_quote(nid)} [{attrs}];")
    for nid in sorted(ft.nodes):
        for child in sorted(ft.nodes[nid].children):
            lines.append(f"  {_quote(nid)} -> {_quote(child)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def fault_tree_galileo(ft: FaultTree, default_prob: float = 0.5) -> str:
    """Galileo text.  The BE probability is a placeholder: the synthesized
    tree carries no failure data, so every BE gets ``default_prob``."""
    if not 0.0 < default_prob < 1.0:
        raise ValueError("default probability must lie in (0, 1)")
    lines = [f"toplevel {_quote(ft.top)};"]
    for nid in sorted(ft.nodes):
        node = ft.nodes[nid]
        if node.kind is not NodeKind.BE:
            children = " ".join(_quote(c) for c in sorted(node.children))
            lines.append(f"{_quote(nid)} {node.kind.value} {children};")
    for node in ft.basic_events:
        lines.append(f"{_quote(node.id)} prob={default_prob!r};")
    return "\n".join(lines) + "\n"


def dependency_graph_to_dict(d: DependencyGraph) -> dict:
    return {
        "components": [c.value for c in d.sorted_components()],
        "edges": [
            {
                "consumer": e.consumer.value,
                "producer": e.producer.value,
                "resources": sorted(r.value for r in e.resources),
            }
            for e in d.edges
        ],
    }


def dependency_graph_json(d: DependencyGraph) -> str:
    return _dumps(dependency_graph_to_dict(d))


def dependency_graph_dot(d: DependencyGraph, red: Iterable[RedundancyGroup] = ()) -> str:
    """Edges point from consumer to producer; redundancy edges are red."""
    red = list(red)
    names = allocate_local_names(d.components)
    rnames = allocate_local_names({r for e in d.edges for r in e.resources})
    redundant = {(grp.consumer, p, grp.resource) for grp in red for p in grp.producers}
    lines = ["digraph DependencyGraph {", "  rankdir=LR;"]
    for c in d.sorted_components():
        lines.append(f"  {_quote(names[c])};")
    for e in d.edges:
        label = ", ".join(sorted(rnames[r] for r in e.resources))
        attrs = f"label={_quote(label)}"
        if any((e.consumer, e.producer, r) in redundant for r in e.resources):
            attrs += ", color=red, fontcolor=red"
        lines.append(f"  {_quote(names[e.consumer])} -> {_quote(names[e.producer])} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def redundancy_json(red: Iterable[RedundancyGroup]) -> str:
    groups = sorted(red, key=RedundancyGroup.sort_key)
    return _dumps(
        [
            {
                "consumer": grp.consumer.value,
                "resource": grp.resource.value,
                "producers": sorted(p.value for p in grp.producers),
            }
            for grp in groups
        ]
    )
