"""Independent reference implementations used only by the tests."""

from __future__ import annotations

from ftsynth.kg import Graph, Triple
from ftsynth.query import Bgp, Filter, In, Join, NotEquals, Union, Var

# --- query oracles ----------------------------------------------------------


def _compatible(a: dict, b: dict) -> bool:
    return all(b[k] == v for k, v in a.items() if k in b)


def _join(left: list[dict], right: list[dict]) -> list[dict]:
    out = []
    seen = set()
    for a in left:
        for b in right:
            if _compatible(a, b):
                m = {**a, **b}
                key = frozenset(m.items())
                if key not in seen:
                    seen.add(key)
                    out.append(m)
    return out


def _condition(cond, mu: dict) -> bool:
    if isinstance(cond, In):
        return cond.var in mu and mu[cond.var] in cond.allowed
    if isinstance(cond, NotEquals):
        return cond.a in mu and cond.b in mu and mu[cond.a] != mu[cond.b]
    raise TypeError(cond)


def _scan(g: Graph, tp) -> list[dict]:
    """All solutions of one triple pattern, by scanning every triple."""
    out = []
    for t in g.triples:
        mu: dict = {}
        ok = True
        for pos, value in zip((tp.subject, tp.predicate, tp.object), (t.subject, t.predicate, t.object)):
            if isinstance(pos, Var):
                if mu.get(pos, value) != value:
                    ok = False
                    break
                mu[pos] = value
            elif pos != value:
                ok = False
                break
        if ok:
            out.append(mu)
    return out


def algebra_solutions(g: Graph, pattern) -> list[dict]:
    """Set-algebra semantics: scan each triple pattern, then join/union/filter."""
    if isinstance(pattern, Bgp):
        acc = [{}]
        for tp in pattern.patterns:
            acc = _join(acc, _scan(g, tp))
        return acc
    if isinstance(pattern, Union):
        return algebra_solutions(g, pattern.left) + algebra_solutions(g, pattern.right)
    if isinstance(pattern, Join):
        acc = [{}]
        for part in pattern.parts:
            acc = _join(acc, algebra_solutions(g, part))
        return acc
    if isinstance(pattern, Filter):
        return [mu for mu in algebra_solutions(g, pattern.inner) if _condition(pattern.condition, mu)]
    raise TypeError(pattern)


def enumerated_solutions(g: Graph, pattern) -> list[dict]:
    """Try every assignment of graph terms to the pattern's variables.

    Variables are assigned one at a time in order of first appearance and
    a triple pattern is checked (by plain membership) as soon as all its
    variables are assigned, which rejects a partial assignment without
    changing the set of complete assignments that survive.
    """
    domain = sorted(g.terms(), key=repr)
    if isinstance(pattern, Bgp):
        variables: list = []
        for tp in pattern.patterns:
            for x in (tp.subject, tp.predicate, tp.object):
                if isinstance(x, Var) and x not in variables:
                    variables.append(x)
        # pattern i is checked right after its last variable is assigned
        due: dict[int, list] = {}
        for tp in pattern.patterns:
            last = max((variables.index(v) for v in tp.vars()), default=-1)
            due.setdefault(last, []).append(tp)

        facts = {(t.subject, t.predicate, t.object) for t in g.triples}

        def holds(tp, mu) -> bool:
            return tuple(mu[x] if isinstance(x, Var) else x for x in (tp.subject, tp.predicate, tp.object)) in facts

        out = []
        if not all(holds(tp, {}) for tp in due.get(-1, ())):
            return out
        checks = [due.get(i, []) for i in range(len(variables))]

        def assign(i: int, mu: dict) -> None:
            if i == len(variables):
                out.append(dict(mu))
                return
            var, pending = variables[i], checks[i]
            for value in domain:
                mu[var] = value
                for tp in pending:
                    if not holds(tp, mu):
                        break
                else:
                    assign(i + 1, mu)
            mu.pop(var, None)

        assign(0, {})
        return out
    if isinstance(pattern, Union):
        return enumerated_solutions(g, pattern.left) + enumerated_solutions(g, pattern.right)
    if isinstance(pattern, Join):
        acc = [{}]
        for part in pattern.parts:
            acc = _join(acc, enumerated_solutions(g, part))
        return acc
    if isinstance(pattern, Filter):
        return [mu for mu in enumerated_solutions(g, pattern.inner) if _condition(pattern.condition, mu)]
    raise TypeError(pattern)


def project(solutions: list[dict], projection) -> set[tuple]:
    return {tuple(mu[v] for v in projection) for mu in solutions}


# --- graph oracles ----------------------------------------------------------


def warshall(n: int, edges) -> set[tuple[int, int]]:
    """Transitive closure by Warshall's boolean matrix algorithm."""
    reach = [[False] * n for _ in range(n)]
    for i, j in edges:
        reach[i][j] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return {(i, j) for i in range(n) for j in range(n) if reach[i][j]}


def has_cycle(n: int, edges) -> bool:
    return any(i == j for i, j in warshall(n, edges))


# --- propagation ------------------------------------------------------------


def naive_propagate(edges, internal) -> set:
    """Iterate 'fails when every supplier of some resource failed' to a fixpoint.

    ``edges`` are (consumer, producer, resource) triples.
    """
    suppliers: dict = {}
    for c, p, r in edges:
        suppliers.setdefault(c, {}).setdefault(r, set()).add(p)
    failed = set(internal)
    while True:
        new = {
            c
            for c, by_res in suppliers.items()
            if c not in failed and any(ps <= failed for ps in by_res.values())
        }
        if not new:
            return failed
        failed |= new
