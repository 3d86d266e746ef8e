"""Shared generators for randomized tests: networks, DAGs, architectures."""

from __future__ import annotations

import itertools

from archuncert.arch import (AnnotatedArchitecture, Component,
                             UncertaintyAnnotation)
from archuncert.bn import BayesianNetwork, Cpt, Variable, row_key


def two_node_network():
    """A -> B with P(A=H)=0.3, P(B=H|A=H)=0.9, P(B=H|A=L)=0.2."""
    return BayesianNetwork(
        variables=(Variable("A", "component", ()),
                   Variable("B", "component", ("A",))),
        cpts={"A": Cpt("A", (), {"": 0.3}),
              "B": Cpt("B", ("A",), {"H": 0.9, "L": 0.2})})


def random_cpt(rng, var_id, parents):
    rows = {}
    if not parents:
        rows[""] = rng.random()
    else:
        for combo in itertools.product("LH", repeat=len(parents)):
            rows[row_key(combo)] = rng.random()
    return Cpt(var_id, tuple(parents), rows)


def random_network(rng, n_min=3, n_max=12, max_parents=3):
    """Random binary DAG network: parents drawn from earlier variables."""
    n = rng.randint(n_min, n_max)
    ids = [f"v{i:02d}" for i in range(n)]
    variables = []
    cpts = {}
    for i, var_id in enumerate(ids):
        k = rng.randint(0, min(i, max_parents))
        parents = tuple(sorted(rng.sample(ids[:i], k)))
        variables.append(Variable(var_id, "component", parents))
        cpts[var_id] = random_cpt(rng, var_id, parents)
    return BayesianNetwork(tuple(variables), cpts)


def random_query(rng, net):
    ids = [v.id for v in net.variables]
    target = rng.choice(ids)
    n_evidence = rng.randint(0, min(2, len(ids) - 1))
    evidence_vars = rng.sample([i for i in ids if i != target], n_evidence)
    return target, {v: rng.choice("LH") for v in evidence_vars}


def random_edge_dag(rng, n_max=15):
    """Random component DAG as (ids, edges) with edges respecting order."""
    n = rng.randint(2, n_max)
    ids = [f"c{i:02d}" for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.3:
                edges.append((ids[i], ids[j]))
    return ids, edges


def dag_architecture(ids, edges, name="random"):
    """Wrap a bare component DAG as an architecture (classical components,
    uniform CPTs) so change_impact and compilation can run on it."""
    components = tuple(Component(i, "classical") for i in ids)
    cpts = {}
    for i in ids:
        parents = tuple(src for src, dst in edges if dst == i)
        rows = ({"": 0.5} if not parents else
                {row_key(c): 0.5 for c in
                 itertools.product("LH", repeat=len(parents))})
        cpts[i] = Cpt(i, parents, rows)
    return AnnotatedArchitecture(name, components, tuple(edges), (), cpts)


def random_architecture(rng, n_ml_max=4):
    """Random valid annotated architecture with ml components, shared or
    per-component epistemic sources, and random CPTs."""
    n_ml = rng.randint(1, n_ml_max)
    ml_ids = [f"m{i}" for i in range(n_ml)]
    components = [Component(i, "ml", f"component {i}") for i in ml_ids]
    edges = []
    for i in range(n_ml):
        for j in range(i + 1, n_ml):
            if rng.random() < 0.4:
                edges.append((ml_ids[i], ml_ids[j]))

    annotations = []
    shared_eu = rng.random() < 0.5
    if shared_eu:
        annotations.append(UncertaintyAnnotation("EU", "epistemic",
                                                 tuple(ml_ids)))
    else:
        annotations.extend(
            UncertaintyAnnotation(f"EU_{i}", "epistemic", (i,))
            for i in ml_ids)
    annotations.extend(
        UncertaintyAnnotation(f"SU_{i}", "stochastic", (i,)) for i in ml_ids)

    arch = AnnotatedArchitecture(f"random-{rng.randint(0, 10**6)}",
                                 tuple(components), tuple(edges),
                                 tuple(annotations), {})
    from archuncert.arch import expected_parents

    cpts = {}
    for a in annotations:
        cpts[a.id] = random_cpt(rng, a.id, ())
    for c in components:
        cpts[c.id] = random_cpt(rng, c.id, expected_parents(arch, c.id))
    return AnnotatedArchitecture(arch.name, arch.components, arch.edges,
                                 arch.annotations, cpts)


def brute_force_reachable(edges, start):
    """Reference transitive closure by repeated relaxation."""
    reach = {start}
    changed = True
    while changed:
        changed = False
        for src, dst in edges:
            if src in reach and dst not in reach:
                reach.add(dst)
                changed = True
    reach.discard(start)
    return reach
