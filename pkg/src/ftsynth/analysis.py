"""Qualitative fault tree analysis and the failure-propagation oracle."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .depgraph import DependencyGraph, RedundancyGroup
from .kg import Iri
from .synthesis import FaultTree, NodeKind

DEFAULT_CUT_SET_CAP = 10**6
DEFAULT_SEED = 42
EXHAUSTIVE_LIMIT = 16
DEFAULT_SAMPLES = 10_000
BRUTE_FORCE_LIMIT = 20


class UnknownEventError(KeyError):
    pass


class CutSetLimitError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class CutSet:
    bes: tuple[str, ...]

    def __post_init__(self):
        if not self.bes:
            raise ValueError("a cut set is non-empty")
        object.__setattr__(self, "bes", tuple(sorted(set(self.bes))))

    def __len__(self) -> int:
        return len(self.bes)

    def __iter__(self):
        return iter(self.bes)

    def __str__(self) -> str:
        return " ".join(self.bes)


def _canonical(sets: Iterable[Iterable[str]]) -> list[CutSet]:
    return sorted((CutSet(tuple(s)) for s in sets), key=lambda c: (len(c), c.bes))


def _check_scenario(ft: FaultTree, failed: Iterable[str]) -> frozenset[str]:
    failed = frozenset(failed)
    for be in failed:
        node = ft.nodes.get(be)
        if node is None or node.kind is not NodeKind.BE:
            raise UnknownEventError(be)
    return failed


def evaluate(ft: FaultTree, failed: Iterable[str]) -> bool:
    """Whether the top event occurs when exactly the BEs in ``failed`` occur."""
    failed = _check_scenario(ft, failed)
    value: dict[str, bool] = {}
    for nid in ft.topological_order():
        node = ft.nodes[nid]
        if node.kind is NodeKind.BE:
            value[nid] = nid in failed
        elif node.kind is NodeKind.OR:
            value[nid] = any(value[c] for c in node.children)
        else:
            value[nid] = all(value[c] for c in node.children)
    return value[ft.top]


class _Compiled:
    """The tree as bitmask operations over BE indices, for bulk evaluation."""

    def __init__(self, ft: FaultTree):
        self.events = [n.id for n in ft.basic_events]
        bit = {be: 1 << i for i, be in enumerate(self.events)}
        slot: dict[str, int] = {}
        self.ops: list[tuple[bool, list[int], int]] = []  # (is_and, child slots, be mask)
        for nid in ft.topological_order():
            node = ft.nodes[nid]
            if node.kind is NodeKind.BE:
                continue
            slots = [slot[c] for c in node.children if c in slot]
            bes = 0
            for c in node.children:
                if c in bit:
                    bes |= bit[c]
            slot[nid] = len(self.ops)
            self.ops.append((node.kind is NodeKind.AND, slots, bes))
        self.top_slot = slot.get(ft.top)
        self.top_bit = bit.get(ft.top, 0)

    def __call__(self, mask: int) -> bool:
        if self.top_slot is None:
            return bool(mask & self.top_bit)
        vals = []
        for is_and, slots, bes in self.ops:
            if is_and:
                v = (mask & bes) == bes and all(vals[s] for s in slots)
            else:
                v = bool(mask & bes) or any(vals[s] for s in slots)
            vals.append(v)
        return vals[self.top_slot]


def _minimize(family: set[int]) -> set[int]:
    kept: list[int] = []
    for s in sorted(family, key=lambda m: (bin(m).count("1"), m)):
        if not any((k & s) == k for k in kept):
            kept.append(s)
    return set(kept)


def minimal_cut_sets(ft: FaultTree, cap: int = DEFAULT_CUT_SET_CAP) -> list[CutSet]:
    """Exact minimal cut sets by bottom-up family expansion with absorption.

    OR takes the union of its children's families, AND the pairwise unions
    across them; each family is minimized before use.  Raises
    :class:`CutSetLimitError` if an intermediate family exceeds ``cap``.
    """
    events = [n.id for n in ft.basic_events]
    bit = {be: 1 << i for i, be in enumerate(events)}
    families: dict[str, set[int]] = {}
    for nid in ft.topological_order():
        node = ft.nodes[nid]
        if node.kind is NodeKind.BE:
            families[nid] = {bit[nid]}
            continue
        if node.kind is NodeKind.OR:
            fam: set[int] = set()
            for c in node.children:
                fam |= families[c]
                if len(fam) > cap:
                    raise CutSetLimitError(f"cut set family of {nid} exceeds {cap}")
        else:
            fam = {0}
            for c in node.children:
                fam = {a | b for a in fam for b in families[c]}
                if len(fam) > cap:
                    raise CutSetLimitError(f"cut set family of {nid} exceeds {cap}")
                fam = _minimize(fam)
        families[nid] = _minimize(fam)
    return _canonical(
        [events[i] for i in range(len(events)) if m >> i & 1] for m in families[ft.top]
    )


def brute_force_cut_sets(ft: FaultTree, limit: int = BRUTE_FORCE_LIMIT) -> list[CutSet]:
    """Minimal cut sets by evaluating the tree on every subset of BEs.

    A true subset is minimal when dropping any single member makes the top
    event false; that suffices because AND/OR trees are monotone.
    """
    events = [n.id for n in ft.basic_events]
    n = len(events)
    if n > limit:
        raise CutSetLimitError(f"{n} basic events exceed the brute-force limit of {limit}")
    truth = [evaluate(ft, (events[i] for i in range(n) if m >> i & 1)) for m in range(1 << n)]
    minimal = []
    for m in range(1, 1 << n):
        if truth[m] and not any(truth[m & ~(1 << i)] for i in range(n) if m >> i & 1):
            minimal.append([events[i] for i in range(n) if m >> i & 1])
    return _canonical(minimal)


# --- propagation oracle ------------------------------------------------------


def _supplier_masks(d: DependencyGraph, index: dict[Iri, int]) -> list[list[int]]:
    masks: list[list[int]] = [[] for _ in index]
    for c, i in index.items():
        for producers in d.suppliers(c).values():
            m = 0
            for p in producers:
                m |= 1 << index[p]
            masks[i].append(m)
    return masks


def _fixpoint(masks: list[list[int]], failed: int) -> int:
    changed = True
    while changed:
        changed = False
        for i, options in enumerate(masks):
            if failed >> i & 1:
                continue
            if any((m & failed) == m for m in options):
                failed |= 1 << i
                changed = True
    return failed


def _check_groups(d: DependencyGraph, red: Iterable[RedundancyGroup]) -> None:
    for grp in red:
        if d.suppliers(grp.consumer).get(grp.resource) != grp.producers:
            raise ValueError(
                f"redundancy group for {grp.consumer} / {grp.resource} "
                "does not match the dependency graph's suppliers"
            )


def propagate(
    d: DependencyGraph,
    red: Iterable[RedundancyGroup],
    internal: Iterable[Iri],
) -> set[Iri]:
    """Least set of failed components containing ``internal``.

    A component fails once every supplier of some resource it consumes has
    failed.  Sole suppliers and redundancy groups are the same rule; the
    groups in ``red`` are only checked against ``d``, not used to decide.
    """
    _check_groups(d, red)
    comps = d.sorted_components()
    index = {c: i for i, c in enumerate(comps)}
    start = 0
    for c in internal:
        if c not in index:
            raise KeyError(f"{c} is not a component of the dependency graph")
        start |= 1 << index[c]
    result = _fixpoint(_supplier_masks(d, index), start)
    return {c for c, i in index.items() if result >> i & 1}


@dataclass
class EquivalenceReport:
    checked: int
    exhaustive: bool
    seed: Optional[int]
    counterexamples: list[tuple[tuple[str, ...], bool, bool]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def format(self) -> str:
        mode = "exhaustive" if self.exhaustive else f"random sample, seed {self.seed}"
        lines = [f"checked {self.checked} failure scenarios ({mode})"]
        for bes, tree_value, oracle_value in self.counterexamples:
            lines.append(
                f"counterexample: {{{', '.join(bes)}}} fault tree={tree_value} propagation={oracle_value}"
            )
        lines.append(f"{len(self.counterexamples)} counterexample(s)")
        return "\n".join(lines)


def check_equivalence(
    d: DependencyGraph,
    red: Iterable[RedundancyGroup],
    ft: FaultTree,
    top: Iri,
    seed: int = DEFAULT_SEED,
    samples: int = DEFAULT_SAMPLES,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
) -> EquivalenceReport:
    """Compare tree evaluation with the propagation fixpoint.

    Scenarios are sets of components with an internal fault; each maps to
    the set of their BEs.  All subsets are tried when at most
    ``exhaustive_limit`` components have a BE, otherwise ``samples``
    uniformly random subsets drawn from ``random.Random(seed)``.
    """
    red = list(red)
    _check_groups(d, red)
    be_of: dict[Iri, str] = {}
    for node in ft.basic_events:
        if node.component is not None:
            be_of[node.component] = node.id

    comps = d.sorted_components()
    index = {c: i for i, c in enumerate(comps)}
    masks = _supplier_masks(d, index)
    if top not in index:
        raise KeyError(f"{top} is not a component of the dependency graph")
    top_bit = 1 << index[top]

    tree = _Compiled(ft)
    tree_bit = {be: 1 << i for i, be in enumerate(tree.events)}
    scenario_comps = sorted(be_of, key=lambda c: c.value)
    n = len(scenario_comps)
    comp_bits = [1 << index[c] for c in scenario_comps]
    be_bits = [tree_bit[be_of[c]] for c in scenario_comps]

    exhaustive = n <= exhaustive_limit
    if exhaustive:
        subsets: Iterable[int] = range(1 << n)
        checked = 1 << n
    else:
        rng = random.Random(seed)
        subsets = [rng.getrandbits(n) for _ in range(samples)]
        checked = samples

    report = EquivalenceReport(checked, exhaustive, None if exhaustive else seed)
    for s in subsets:
        cmask = bmask = 0
        for i in range(n):
            if s >> i & 1:
                cmask |= comp_bits[i]
                bmask |= be_bits[i]
        tree_value = tree(bmask)
        oracle_value = bool(_fixpoint(masks, cmask) & top_bit)
        if tree_value != oracle_value:
            bes = tuple(sorted(be_of[scenario_comps[i]] for i in range(n) if s >> i & 1))
            report.counterexamples.append((bes, tree_value, oracle_value))
    return report
