"""Fault tree synthesis from a dependency graph and its redundancy groups.

Every component reachable from the top component gets an OR gate
``<c>.fails`` whose children are the component's internal-fault basic
event ``<c>.internal``, one AND gate ``<c>.<r>.redundant`` per redundancy
group of ``c`` (over the OR gates of the group's producers), and the OR
gate of every producer that is the sole supplier of some resource of
``c``.  OR gates are shared, so the result is a DAG.
"""

from __future__ import annotations

import enum
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .depgraph import DependencyGraph, RedundancyGroup
from .kg import Iri


class NodeKind(str, enum.Enum):
    BE = "be"
    OR = "or"
    AND = "and"


class SynthesisError(Exception):
    pass


class TopNotFoundError(SynthesisError):
    pass


class CyclicDependencyError(SynthesisError):
    def __init__(self, cycle: list[Iri]):
        path = " -> ".join(local_name(c) for c in cycle + cycle[:1])
        super().__init__(f"cyclic functional dependency: {path}")
        self.cycle = cycle


@dataclass(frozen=True)
class FtNode:
    id: str
    kind: NodeKind
    label: str
    children: tuple[str, ...] = ()
    component: Optional[Iri] = None
    resource: Optional[Iri] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", NodeKind(self.kind))
        object.__setattr__(self, "children", tuple(self.children))
        if self.kind is NodeKind.BE and self.children:
            raise ValueError(f"basic event {self.id} cannot have children")
        if self.kind is not NodeKind.BE and not self.children:
            raise ValueError(f"gate {self.id} needs at least one child")


@dataclass(frozen=True)
class FaultTree:
    nodes: dict[str, FtNode]
    top: str
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.top not in self.nodes:
            raise ValueError(f"top node {self.top!r} is not in the tree")
        for node in self.nodes.values():
            for child in node.children:
                if child not in self.nodes:
                    raise ValueError(f"{node.id} refers to unknown node {child!r}")
        object.__setattr__(self, "warnings", tuple(self.warnings))
        self.topological_order()  # raises on cycles

    def __getitem__(self, node_id: str) -> FtNode:
        return self.nodes[node_id]

    def of_kind(self, kind: NodeKind) -> list[FtNode]:
        return [self.nodes[k] for k in sorted(self.nodes) if self.nodes[k].kind is kind]

    @property
    def basic_events(self) -> list[FtNode]:
        return self.of_kind(NodeKind.BE)

    def parents(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {k: [] for k in self.nodes}
        for node in self.nodes.values():
            for child in node.children:
                out[child].append(node.id)
        return {k: sorted(v) for k, v in out.items()}

    def topological_order(self) -> list[str]:
        """Children before parents; raises ValueError on a directed cycle."""
        order: list[str] = []
        state: dict[str, int] = {}
        for root in sorted(self.nodes):
            if root in state:
                continue
            stack = [(root, iter(self.nodes[root].children))]
            state[root] = 1
            while stack:
                node, it = stack[-1]
                child = next(it, None)
                if child is None:
                    stack.pop()
                    state[node] = 2
                    order.append(node)
                elif state.get(child) == 1:
                    raise ValueError(f"fault tree has a cycle through {child!r}")
                elif child not in state:
                    state[child] = 1
                    stack.append((child, iter(self.nodes[child].children)))
        return order

    def replace(self, node: FtNode) -> FaultTree:
        """A copy with one node swapped out (used for mutation tests)."""
        nodes = dict(self.nodes)
        nodes[node.id] = node
        return FaultTree(nodes, self.top, self.warnings)


# --- naming ------------------------------------------------------------------

_UNSAFE = re.compile(r"[^A-Za-z0-9_]")


def local_name(iri: Iri | str) -> str:
    """Fragment or last path segment of an IRI, sanitized to [A-Za-z0-9_]."""
    value = str(iri)
    if "#" in value:
        value = value.rsplit("#", 1)[1]
    else:
        value = value.rstrip("/")
        value = value.rsplit("/", 1)[-1]
        if ":" in value:
            value = value.rsplit(":", 1)[1]
    return _UNSAFE.sub("_", value) or "node"


def allocate_local_names(iris: Iterable[Iri]) -> dict[Iri, str]:
    names: dict[Iri, str] = {}
    used: set[str] = set()
    for iri in sorted(set(iris), key=lambda i: i.value):
        base = local_name(iri)
        name, n = base, 1
        while name in used:
            n += 1
            name = f"{base}_{n}"
        used.add(name)
        names[iri] = name
    return names


class NodeNamer:
    """Deterministic node ids; local-name clashes get ``_2``, ``_3`` ... in IRI order."""

    def __init__(self, components: Iterable[Iri], resources: Iterable[Iri] = ()):
        self.components = allocate_local_names(components)
        self.resources = allocate_local_names(resources)

    def node_id(self, component: Iri, kind: NodeKind | str, resource: Optional[Iri] = None) -> str:
        kind = NodeKind(kind)
        c = self.components[component]
        if kind is NodeKind.OR:
            return f"{c}.fails"
        if kind is NodeKind.BE:
            return f"{c}.internal"
        if resource is None:
            raise ValueError("AND gate ids need a resource")
        return f"{c}.{self.resources[resource]}.redundant"


def node_id(component: Iri, kind: NodeKind | str, resource: Optional[Iri] = None) -> str:
    """Id of a single node, with no collision context."""
    names = NodeNamer([component], [resource] if resource is not None else [])
    return names.node_id(component, kind, resource)


# --- synthesis ---------------------------------------------------------------


def find_cycle(succ: dict[Iri, list[Iri]], nodes: Iterable[Iri]) -> Optional[list[Iri]]:
    """One directed cycle among ``nodes``, or None."""
    state: dict[Iri, int] = {}
    for root in sorted(nodes, key=lambda c: c.value):
        if root in state:
            continue
        path = [root]
        stack = [iter(succ.get(root, ()))]
        state[root] = 1
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                state[path.pop()] = 2
            elif state.get(nxt) == 1:
                return path[path.index(nxt) :]
            elif nxt not in state:
                state[nxt] = 1
                path.append(nxt)
                stack.append(iter(succ.get(nxt, ())))
    return None


def strongly_connected(succ: dict[Iri, list[Iri]], nodes: Iterable[Iri]) -> dict[Iri, frozenset[Iri]]:
    """Map each node to its strongly connected component (Tarjan)."""
    index: dict[Iri, int] = {}
    low: dict[Iri, int] = {}
    on_stack: set[Iri] = set()
    stack: list[Iri] = []
    out: dict[Iri, frozenset[Iri]] = {}
    counter = 0

    for root in sorted(nodes, key=lambda c: c.value):
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            nxt = next(it, None)
            if nxt is not None:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(succ.get(nxt, ()))))
                elif nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                members = set()
                while True:
                    m = stack.pop()
                    on_stack.discard(m)
                    members.add(m)
                    if m == node:
                        break
                scc = frozenset(members)
                for m in members:
                    out[m] = scc
    return out


class _Builder:
    def __init__(
        self,
        d: DependencyGraph,
        red: Iterable[RedundancyGroup],
        break_cycles: bool,
    ):
        self.d = d
        self.break_cycles = break_cycles
        self.groups: dict[Iri, list[RedundancyGroup]] = defaultdict(list)
        for grp in red:
            self.groups[grp.consumer].append(grp)
        for grps in self.groups.values():
            grps.sort(key=RedundancyGroup.sort_key)
        resources = {r for e in d.edges for r in e.resources} | {g.resource for g in red}
        self.namer = NodeNamer(d.components, resources)
        self.nodes: dict[str, FtNode] = {}
        self.memo: dict[tuple[Iri, frozenset], str] = {}
        self.copies: dict[str, int] = defaultdict(int)
        self.warnings: list[str] = []
        self.scc: dict[Iri, frozenset[Iri]] = {}

    def _fresh(self, base: str) -> str:
        self.copies[base] += 1
        n = self.copies[base]
        return base if n == 1 else f"{base}_{n}"

    def _name(self, c: Iri) -> str:
        return c.value.rsplit("#", 1)[-1] if "#" in c.value else local_name(c)

    def basic_event(self, c: Iri) -> str:
        nid = self.namer.node_id(c, NodeKind.BE)
        if nid not in self.nodes:
            self.nodes[nid] = FtNode(nid, NodeKind.BE, f"{self._name(c)} internal fault", component=c)
        return nid

    def gate(self, c: Iri, path: tuple[Iri, ...]) -> str:
        key = (c, frozenset(path) & self.scc.get(c, frozenset()))
        if key in self.memo:
            return self.memo[key]
        path = path + (c,)
        children = [self.basic_event(c)]

        covered: dict[Iri, set[Iri]] = defaultdict(set)
        for grp in self.groups.get(c, ()):
            covered[grp.resource] = set(grp.producers)
            members = sorted(grp.producers, key=lambda p: p.value)
            if any(p in path for p in members):
                self._back_edge(c, [p for p in members if p in path], and_gate=True)
                continue
            sub = [self.gate(p, path) for p in members]
            base = self.namer.node_id(c, NodeKind.AND, grp.resource)
            nid = self._fresh(base)
            self.nodes[nid] = FtNode(
                nid,
                NodeKind.AND,
                f"loss of all {self._name(grp.resource)} suppliers to {self._name(c)}",
                tuple(sub),
                component=c,
                resource=grp.resource,
            )
            children.append(nid)

        direct: set[Iri] = set()
        for r, producers in self.d.suppliers(c).items():
            if r not in covered:
                direct.update(producers)
        for p in sorted(direct, key=lambda p: p.value):
            if p in path:
                self._back_edge(c, [p], and_gate=False)
                continue
            children.append(self.gate(p, path))

        nid = self._fresh(self.namer.node_id(c, NodeKind.OR))
        self.nodes[nid] = FtNode(nid, NodeKind.OR, f"{self._name(c)} fails", tuple(children), component=c)
        self.memo[key] = nid
        return nid

    def _back_edge(self, c: Iri, producers: list[Iri], and_gate: bool) -> None:
        names = ", ".join(self._name(p) for p in producers)
        if and_gate:
            msg = f"cycle: redundant supply of {self._name(c)} through {names} omitted (back edge)"
        else:
            msg = f"cycle: dependency of {self._name(c)} on {names} omitted (back edge)"
        if msg not in self.warnings:
            self.warnings.append(msg)


def synthesize(
    d: DependencyGraph,
    red: Iterable[RedundancyGroup],
    top: Iri,
    break_cycles: bool = False,
) -> FaultTree:
    """Build the fault tree whose top event is the failure of ``top``.

    With ``break_cycles`` a cyclic dependency subgraph is expanded along
    each path, dropping back edges: a back edge under an OR gate is simply
    left out, and an AND gate that would need a back edge is left out as a
    whole, since it can never be satisfied without the ancestor already
    having failed.
    """
    if top not in d.components:
        raise TopNotFoundError(f"top component {top} is not a component of the dependency graph")
    red = list(red)
    reachable = d.reachable(top)
    succ = d.successors()
    cycle = find_cycle(succ, reachable)
    builder = _Builder(d, red, break_cycles)
    if cycle is not None:
        if not break_cycles:
            raise CyclicDependencyError(cycle)
        builder.scc = {c: s for c, s in strongly_connected(succ, reachable).items() if len(s) > 1}

    top_id = builder.gate(top, ())
    warnings = list(d.warnings)
    for c in d.sorted_components():
        if c not in reachable:
            warnings.append(
                f"{builder._name(c)} is unreachable from the top event {builder._name(top)}; "
                "excluded from the fault tree"
            )
    warnings.extend(builder.warnings)
    nodes = {k: builder.nodes[k] for k in sorted(builder.nodes)}
    return FaultTree(nodes, top_id, tuple(warnings))
