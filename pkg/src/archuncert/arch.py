"""Architecture model: components, data-flow edges, uncertainty annotations.

An annotated architecture is the user-facing artifact. It compiles into a
Bayesian network (``to_network``) for quantitative queries, and supports
qualitative change-impact analysis over the data-flow graph.

Parent-order convention (CPT row keys depend on it, so it is fixed):
a component variable's parents are its uncertainty annotations in
declaration order, followed by its data-flow predecessors in edge
declaration order. Sensor components without a CPT (e.g. a camera feed)
are pure inputs and are excluded from the compiled network; a sensor
*with* a CPT is a monitor and becomes a root variable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bn import (BayesianNetwork, Cpt, Finding, ValidationReport, Variable,
                 _find_cycle, validate_network)
from .errors import InvalidArchitectureError, UsageError

COMPONENT_KINDS = ("ml", "classical", "sensor", "voter")
ANNOTATION_KINDS = ("epistemic", "stochastic")


@dataclass(frozen=True)
class Component:
    id: str
    kind: str
    label: str = ""


@dataclass(frozen=True)
class UncertaintyAnnotation:
    id: str
    kind: str  # epistemic | stochastic
    attaches_to: tuple[str, ...]


@dataclass(frozen=True)
class AnnotatedArchitecture:
    name: str
    components: tuple[Component, ...]
    edges: tuple[tuple[str, str], ...]
    annotations: tuple[UncertaintyAnnotation, ...]
    cpts: dict[str, Cpt]

    def component(self, comp_id):
        for c in self.components:
            if c.id == comp_id:
                return c
        raise UsageError(f"unknown component: {comp_id!r}")


def _is_input_sensor(arch, component):
    return component.kind == "sensor" and component.id not in arch.cpts


def expected_parents(arch: AnnotatedArchitecture, comp_id: str) -> tuple[str, ...]:
    """Parent list a component's CPT must be keyed by, per the convention
    in the module docstring."""
    input_ids = {c.id for c in arch.components if _is_input_sensor(arch, c)}
    annotations = tuple(a.id for a in arch.annotations if comp_id in a.attaches_to)
    flow = tuple(src for src, dst in arch.edges
                 if dst == comp_id and src not in input_ids)
    return annotations + flow


def validate_architecture(arch: AnnotatedArchitecture) -> ValidationReport:
    report = ValidationReport()
    if not arch.components:
        report.findings.append(
            Finding("no components", detail="architecture has no components"))

    seen = set()
    for item in list(arch.components) + list(arch.annotations):
        if item.id in seen:
            report.findings.append(Finding("duplicate id", item.id))
        seen.add(item.id)

    comp_ids = {c.id for c in arch.components}
    for c in arch.components:
        if c.kind not in COMPONENT_KINDS:
            report.findings.append(
                Finding("bad component kind", c.id, f"kind {c.kind!r}"))

    for src, dst in arch.edges:
        for end in (src, dst):
            if end not in comp_ids:
                report.findings.append(
                    Finding("dangling edge", end,
                            f"edge {src!r}->{dst!r} references a missing component"))

    succ = {c.id: [] for c in arch.components}
    for src, dst in arch.edges:
        if src in succ and dst in succ:
            succ[src].append(dst)
    cycle = _find_cycle(sorted(comp_ids), lambda n: succ.get(n, ()))
    if cycle is not None:
        report.findings.append(Finding("cycle", cycle[0], path=tuple(cycle)))

    for a in arch.annotations:
        if a.kind not in ANNOTATION_KINDS:
            report.findings.append(
                Finding("bad annotation kind", a.id, f"kind {a.kind!r}"))
        if not a.attaches_to:
            report.findings.append(
                Finding("unattached annotation", a.id,
                        "annotation attaches to no component"))
        if a.kind == "stochastic" and len(a.attaches_to) != 1:
            report.findings.append(
                Finding("bad attachment", a.id,
                        "stochastic annotations attach to exactly one component"))
        for cid in a.attaches_to:
            comp = next((c for c in arch.components if c.id == cid), None)
            if comp is None:
                report.findings.append(
                    Finding("dangling attachment", a.id,
                            f"attached component {cid!r} does not exist"))
            elif comp.kind != "ml":
                report.findings.append(
                    Finding("bad attachment", a.id,
                            f"attached component {cid!r} has kind {comp.kind!r}, "
                            "annotations attach to ml components"))

    if cycle is not None:
        return report  # parent lists are ill-defined on a cyclic graph

    for a in arch.annotations:
        _check_cpt(arch, report, a.id, ())
    for c in arch.components:
        if _is_input_sensor(arch, c):
            continue
        if c.kind == "sensor":
            _check_cpt(arch, report, c.id, ())  # monitors are roots
        else:
            _check_cpt(arch, report, c.id, expected_parents(arch, c.id))

    known = comp_ids | {a.id for a in arch.annotations}
    for extra in sorted(set(arch.cpts) - known):
        report.findings.append(
            Finding("unknown CPT", extra, "CPT for an unknown variable"))
    return report


def _check_cpt(arch, report, var_id, parents):
    cpt = arch.cpts.get(var_id)
    if cpt is None:
        expected = Cpt(var_id, tuple(parents), {}).expected_keys()
        report.findings.append(
            Finding("missing CPT", var_id, f"expected rows {expected}"))
        return
    if tuple(cpt.parents) != tuple(parents):
        report.findings.append(
            Finding("CPT parent mismatch", var_id,
                    f"expected parents {list(parents)}, got {list(cpt.parents)}"))
        return
    expected = set(cpt.expected_keys())
    present = set(cpt.rows)
    for key in sorted(expected - present):
        report.findings.append(Finding("missing CPT row", var_id, f"row {key!r}"))
    for key in sorted(present - expected):
        report.findings.append(Finding("extra CPT row", var_id, f"row {key!r}"))
    for key in sorted(present & expected):
        p = cpt.rows[key]
        if not (isinstance(p, (int, float)) and 0.0 <= p <= 1.0):
            report.findings.append(
                Finding("probability out of range", var_id,
                        f"row {key!r} has p_high {p!r}"))


def _variable_kind(component):
    if component.kind == "sensor":
        return "monitor"
    if component.kind == "voter":
        return "voter"
    return "component"


def to_network(arch: AnnotatedArchitecture) -> BayesianNetwork:
    """Compile an architecture into a Bayesian network.

    One variable per annotation (roots) and per non-input component;
    deterministic: variable order is annotations then components, both in
    declaration order.
    """
    report = validate_architecture(arch)
    if not report.ok:
        raise InvalidArchitectureError(report.findings)

    variables = []
    cpts = {}
    for a in arch.annotations:
        variables.append(Variable(a.id, a.kind, ()))
        cpts[a.id] = arch.cpts[a.id]
    for c in arch.components:
        if _is_input_sensor(arch, c):
            continue
        parents = () if c.kind == "sensor" else expected_parents(arch, c.id)
        variables.append(Variable(c.id, _variable_kind(c), parents))
        cpts[c.id] = arch.cpts[c.id]

    net = BayesianNetwork(tuple(variables), cpts)
    check = validate_network(net)
    if not check.ok:  # should be unreachable given architecture validation
        raise InvalidArchitectureError(check.findings)
    return net


def change_impact(arch: AnnotatedArchitecture, component: str) -> list[str]:
    """All components downstream of the given one via data-flow edges,
    in topological order. Empty list: the change is isolated."""
    arch.component(component)  # raises UsageError on unknown id
    succ = {c.id: [] for c in arch.components}
    for src, dst in arch.edges:
        if src in succ and dst in succ:
            succ[src].append(dst)

    reachable = set()
    frontier = [component]
    while frontier:
        node = frontier.pop()
        for nxt in succ.get(node, ()):
            if nxt not in reachable:
                reachable.add(nxt)
                frontier.append(nxt)
    reachable.discard(component)

    order = _topological_order(arch, succ)
    return [c for c in order if c in reachable]


def _topological_order(arch, succ):
    indeg = {c.id: 0 for c in arch.components}
    for src, dsts in succ.items():
        for dst in dsts:
            indeg[dst] += 1
    position = {c.id: i for i, c in enumerate(arch.components)}
    ready = sorted((i for i, d in indeg.items() if d == 0), key=position.get)
    order = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        for nxt in succ.get(node, ()):
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                ready.append(nxt)
        ready.sort(key=position.get)
    return order
