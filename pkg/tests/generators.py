"""Random knowledge graphs for property and acceptance tests."""

from __future__ import annotations

import random

from ftsynth.kg import RDF_TYPE, Graph, Iri, Triple
from ftsynth.ontology import Vocabulary

EX = "http://test.example/kg#"
V = Vocabulary()


def iri(name: str) -> Iri:
    return Iri(EX + name)


def component_graph(
    rng: random.Random,
    max_components: int = 10,
    max_resources: int = 3,
    redundancy_p: float = 0.3,
    acyclic: bool = True,
) -> Graph:
    """A well-typed KG whose single system is the last component.

    Producers are wired to consumers of higher index only, and a pair is
    only wired if the consumer produces nothing the producer consumes, so
    with ``acyclic`` the dependency graph has no cycle.  For each consumed
    resource, with probability ``redundancy_p`` two or three suppliers are
    wired instead of one.
    """
    n = rng.randint(1, max_components)
    k = rng.randint(1, max_resources)
    comps = [iri(f"C{i}") for i in range(n)]
    res = [iri(f"R{j}") for j in range(k)]
    produces = [{r for r in res if rng.random() < 0.5} for _ in comps]
    consumes = [{r for r in res if rng.random() < 0.45} for _ in comps]

    triples = set(V.schema())
    for r in res:
        triples.add(Triple(r, RDF_TYPE, V.resource))
    top = comps[-1]
    for i, c in enumerate(comps):
        triples.add(Triple(c, RDF_TYPE, V.component))
        if c != top:
            triples.add(Triple(c, V.part_of, top))
        # sometimes split production and consumption over two functions
        if produces[i] and consumes[i] and rng.random() < 0.3:
            fp, fc = iri(f"F{i}p"), iri(f"F{i}c")
            triples.update({Triple(c, V.has, fp), Triple(c, V.has, fc)})
        else:
            fp = fc = iri(f"F{i}")
            triples.add(Triple(c, V.has, fp))
            triples.add(Triple(fp, RDF_TYPE, V.function))
        for r in produces[i]:
            triples.add(Triple(fp, V.produces, r))
        for r in consumes[i]:
            triples.add(Triple(fc, V.consumes, r))

    def link(i: int, j: int) -> None:
        roll = rng.random()
        if roll < 0.6:
            triples.add(Triple(comps[i], V.outputs_to, comps[j]))
        elif roll < 0.9:
            triples.add(Triple(comps[j], V.input_from, comps[i]))
        else:
            triples.add(Triple(comps[i], V.outputs_to, comps[j]))
            triples.add(Triple(comps[j], V.input_from, comps[i]))

    for j in range(n):
        for r in sorted(consumes[j], key=str):
            if acyclic:
                cands = [i for i in range(j) if r in produces[i] and not (produces[j] & consumes[i])]
            else:
                cands = [i for i in range(n) if i != j and r in produces[i]]
            if not cands:
                continue
            if len(cands) >= 2 and rng.random() < redundancy_p:
                chosen = rng.sample(cands, rng.randint(2, min(3, len(cands))))
            else:
                chosen = [rng.choice(cands)]
            for i in chosen:
                link(i, j)
    return Graph(triples, {"": EX, "v": V.namespace})


def small_graph(rng: random.Random, max_triples: int = 50) -> Graph:
    """A loosely typed graph over a small pool of nodes, for query tests.

    Mostly shaped like the ontology so the pipeline queries match
    something, with some ill-typed noise mixed in.
    """
    comps = [iri(f"c{i}") for i in range(rng.randint(1, 5))]
    funcs = [iri(f"f{i}") for i in range(rng.randint(1, 5))]
    res = [iri(f"r{i}") for i in range(rng.randint(1, 3))]
    nodes = comps + funcs + res
    makers = [
        lambda: Triple(rng.choice(comps), RDF_TYPE, V.component),
        lambda: Triple(rng.choice(comps), V.has, rng.choice(funcs)),
        lambda: Triple(rng.choice(funcs), RDF_TYPE, rng.choice([V.production, V.consumption])),
        lambda: Triple(rng.choice(funcs), rng.choice([V.produces, V.consumes]), rng.choice(res)),
        lambda: Triple(rng.choice(comps), rng.choice(V.io_relations), rng.choice(comps)),
        lambda: Triple(rng.choice(nodes), rng.choice([V.part_of, V.has, V.outputs_to]), rng.choice(nodes)),
    ]
    weights = [3, 3, 3, 3, 3, 1]
    size = rng.randint(0, max_triples)
    triples = set()
    for _ in range(size * 2):
        if len(triples) >= size:
            break
        triples.add(rng.choices(makers, weights)[0]())
    return Graph(triples)


def partof_dag(rng: random.Random, max_nodes: int = 20) -> tuple[list[Iri], list[tuple[int, int]]]:
    n = rng.randint(1, max_nodes)
    p = rng.uniform(0.05, 0.4)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    order = list(range(n))
    rng.shuffle(order)  # hide the topological order in the names
    nodes = [iri(f"p{order[i]}") for i in range(n)]
    return nodes, edges


def producer_cluster(k: int) -> Graph:
    """One consumer wired to ``k`` producers of the same resource."""
    triples = set(V.schema())
    r = iri("Fuel")
    consumer = iri("Engine")
    triples |= {
        Triple(r, RDF_TYPE, V.resource),
        Triple(consumer, RDF_TYPE, V.component),
        Triple(consumer, V.has, iri("Burn")),
        Triple(iri("Burn"), V.consumes, r),
    }
    for i in range(k):
        p, f = iri(f"Tank{i}"), iri(f"Supply{i}")
        triples |= {
            Triple(p, RDF_TYPE, V.component),
            Triple(p, V.has, f),
            Triple(f, V.produces, r),
            Triple(p, V.outputs_to, consumer),
            Triple(p, V.part_of, consumer),
        }
    return Graph(triples)
