"""Discrete Bayesian networks: representation, validation, exact inference.

Variables in this toolkit are binary (low/high uncertainty), but the factor
algebra below is written over arbitrary finite state spaces so the binary
case is just the default.

Two inference routes are provided on purpose: ``marginal_brute_force``
enumerates the full joint and serves as the oracle, ``marginal_ve`` is the
production path (variable elimination). They must agree to 1e-12.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import ImpossibleEvidenceError, InvalidNetworkError, UsageError

LOW = "L"
HIGH = "H"
BINARY_STATES = (LOW, HIGH)

VARIABLE_KINDS = ("component", "epistemic", "stochastic", "monitor", "voter")
ROOT_ONLY_KINDS = ("epistemic", "stochastic", "monitor")


def row_key(states):
    """Key a CPT row by its parent assignment: 'L'/'H' symbols joined by
    commas in declared parent order; the empty string for roots."""
    return ",".join(states)


@dataclass(frozen=True)
class Variable:
    id: str
    kind: str
    parents: tuple[str, ...] = ()
    states: tuple[str, ...] = BINARY_STATES


@dataclass(frozen=True)
class Cpt:
    """P(variable = H | parent assignment), one row per assignment.

    Only the high-state probability is stored; P(L | ...) is 1 - p_high by
    construction, so rows cannot be unnormalized.
    """

    variable: str
    parents: tuple[str, ...]
    rows: dict[str, float]  # row_key -> p_high

    def expected_keys(self):
        if not self.parents:
            return [""]
        return [row_key(c) for c in
                itertools.product(BINARY_STATES, repeat=len(self.parents))]


@dataclass(frozen=True)
class BayesianNetwork:
    variables: tuple[Variable, ...]
    cpts: dict[str, Cpt]

    def variable_map(self):
        return {v.id: v for v in self.variables}

    def variable(self, var_id):
        for v in self.variables:
            if v.id == var_id:
                return v
        raise UsageError(f"unknown variable: {var_id!r}")


@dataclass(frozen=True)
class Finding:
    kind: str
    variable: str | None = None
    detail: str = ""
    path: tuple[str, ...] = ()

    def __str__(self):
        parts = [self.kind]
        if self.variable is not None:
            parts.append(f"variable={self.variable}")
        if self.path:
            parts.append("path=" + "->".join(self.path))
        if self.detail:
            parts.append(self.detail)
        return " ".join(parts)


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self):
        return not self.findings

    def __str__(self):
        if self.ok:
            return "OK"
        return "\n".join(str(f) for f in self.findings)


def _find_cycle(ids, parents_of):
    """Return one cycle as a vertex sequence [a, ..., a], or None."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {i: WHITE for i in ids}
    stack = []

    def visit(node):
        color[node] = GREY
        stack.append(node)
        for parent in parents_of(node):
            if parent not in color:
                continue
            if color[parent] == GREY:
                start = stack.index(parent)
                return stack[start:] + [parent]
            if color[parent] == WHITE:
                cycle = visit(parent)
                if cycle is not None:
                    return cycle
        stack.pop()
        color[node] = BLACK
        return None

    for node in ids:
        if color[node] == WHITE:
            cycle = visit(node)
            if cycle is not None:
                return cycle
    return None


def validate_network(net: BayesianNetwork) -> ValidationReport:
    """Check a network for structural defects. Defects are data, not
    exceptions; inference entry points refuse networks that do not pass."""
    report = ValidationReport()
    seen = set()
    for v in net.variables:
        if v.id in seen:
            report.findings.append(Finding("duplicate id", v.id))
        seen.add(v.id)
    ids = {v.id for v in net.variables}

    for v in net.variables:
        for p in v.parents:
            if p not in ids:
                report.findings.append(
                    Finding("dangling parent", v.id, f"parent {p!r} not in network"))
        if v.kind in ROOT_ONLY_KINDS and v.parents:
            report.findings.append(
                Finding("root kind with parents", v.id,
                        f"kind {v.kind!r} variables must be roots"))

    parent_map = {v.id: v.parents for v in net.variables}
    cycle = _find_cycle(sorted(ids), lambda n: parent_map.get(n, ()))
    if cycle is not None:
        report.findings.append(Finding("cycle", cycle[0], path=tuple(cycle)))

    for v in net.variables:
        cpt = net.cpts.get(v.id)
        if cpt is None:
            report.findings.append(Finding("missing CPT", v.id))
            continue
        if tuple(cpt.parents) != tuple(v.parents):
            report.findings.append(
                Finding("CPT parent mismatch", v.id,
                        f"declared {list(v.parents)}, CPT has {list(cpt.parents)}"))
            continue
        expected = set(cpt.expected_keys())
        present = set(cpt.rows)
        for key in sorted(expected - present):
            report.findings.append(
                Finding("missing CPT row", v.id, f"row {key!r}"))
        for key in sorted(present - expected):
            report.findings.append(
                Finding("extra CPT row", v.id, f"row {key!r}"))
        for key in sorted(present & expected):
            p = cpt.rows[key]
            if not (isinstance(p, (int, float)) and 0.0 <= p <= 1.0):
                report.findings.append(
                    Finding("probability out of range", v.id,
                            f"row {key!r} has p_high {p!r}"))
    for extra in sorted(set(net.cpts) - ids):
        report.findings.append(
            Finding("unknown CPT", extra, "CPT for a variable not in the network"))
    return report


def _require_valid(net):
    report = validate_network(net)
    if not report.ok:
        raise InvalidNetworkError(report.findings)


def _cpt_entry(cpt, state, parent_states):
    p_high = cpt.rows[row_key(parent_states)]
    return p_high if state == HIGH else 1.0 - p_high


def joint_probability(net: BayesianNetwork, assignment: dict[str, str]) -> float:
    """Probability of one full assignment: the product over variables of
    the CPT entry for the variable's state given its parents' states."""
    _require_valid(net)
    ids = [v.id for v in net.variables]
    missing = [i for i in ids if i not in assignment]
    extra = [k for k in assignment if k not in ids]
    if missing or extra:
        raise UsageError(
            f"assignment must cover every variable exactly once "
            f"(missing: {missing}, extra: {extra})")
    prob = 1.0
    for v in net.variables:
        cpt = net.cpts[v.id]
        parent_states = tuple(assignment[p] for p in v.parents)
        prob *= _cpt_entry(cpt, assignment[v.id], parent_states)
    return prob


def _check_query(net, target, evidence):
    ids = {v.id for v in net.variables}
    if target not in ids:
        raise UsageError(f"unknown target variable: {target!r}")
    unknown = sorted(set(evidence) - ids)
    if unknown:
        raise UsageError(f"evidence names unknown variables: {unknown}")
    for var, state in evidence.items():
        if state not in BINARY_STATES:
            raise UsageError(f"evidence {var}={state!r}: state must be 'L' or 'H'")


def marginal_brute_force(net: BayesianNetwork, target: str,
                         evidence: dict[str, str] | None = None) -> dict[str, float]:
    """P(target | evidence) by full-joint enumeration. The oracle route:
    exponential, only viable on small networks, trusted by construction."""
    _require_valid(net)
    evidence = dict(evidence or {})
    _check_query(net, target, evidence)
    ids = [v.id for v in net.variables]
    var_states = [net.variable_map()[i].states for i in ids]
    target_states = net.variable_map()[target].states

    totals = {s: 0.0 for s in target_states}
    for combo in itertools.product(*var_states):
        assignment = dict(zip(ids, combo))
        if any(assignment[v] != s for v, s in evidence.items()):
            continue
        prob = 1.0
        for v in net.variables:
            parent_states = tuple(assignment[p] for p in v.parents)
            prob *= _cpt_entry(net.cpts[v.id], assignment[v.id], parent_states)
        totals[assignment[target]] += prob
    normalizer = sum(totals.values())
    if normalizer <= 0.0:
        raise ImpossibleEvidenceError(evidence)
    return {s: totals[s] / normalizer for s in target_states}


# ---------------------------------------------------------------------------
# Factor algebra


@dataclass(frozen=True)
class Factor:
    """A nonnegative table over an ordered variable scope."""

    scope: tuple[str, ...]
    states: tuple[tuple[str, ...], ...]  # parallel to scope
    table: dict[tuple[str, ...], float]

    def state_space(self, var):
        return self.states[self.scope.index(var)]


def unit_factor() -> Factor:
    return Factor(scope=(), states=(), table={(): 1.0})


def factor_from_cpt(net: BayesianNetwork, var_id: str) -> Factor:
    v = net.variable_map()[var_id]
    cpt = net.cpts[var_id]
    scope = tuple(cpt.parents) + (var_id,)
    states = tuple(net.variable_map()[s].states for s in cpt.parents) + (v.states,)
    table = {}
    for combo in itertools.product(*states):
        parent_states, state = combo[:-1], combo[-1]
        table[combo] = _cpt_entry(cpt, state, parent_states)
    return Factor(scope, states, table)


def factor_product(f1: Factor, f2: Factor) -> Factor:
    """Pointwise product over the ordered union of the two scopes."""
    for var in f1.scope:
        if var in f2.scope and f1.state_space(var) != f2.state_space(var):
            raise UsageError(
                f"factor product: variable {var!r} has mismatched state spaces")
    scope = f1.scope + tuple(v for v in f2.scope if v not in f1.scope)
    states = tuple(
        f1.state_space(v) if v in f1.scope else f2.state_space(v) for v in scope)
    idx1 = [scope.index(v) for v in f1.scope]
    idx2 = [scope.index(v) for v in f2.scope]
    table = {}
    for combo in itertools.product(*states):
        k1 = tuple(combo[i] for i in idx1)
        k2 = tuple(combo[i] for i in idx2)
        table[combo] = f1.table[k1] * f2.table[k2]
    return Factor(scope, states, table)


def sum_out(f: Factor, var: str) -> Factor:
    """Marginalize one variable out of a factor."""
    if var not in f.scope:
        raise UsageError(f"sum_out: {var!r} not in factor scope {list(f.scope)}")
    pos = f.scope.index(var)
    scope = f.scope[:pos] + f.scope[pos + 1:]
    states = f.states[:pos] + f.states[pos + 1:]
    table = {}
    for combo, value in f.table.items():
        reduced = combo[:pos] + combo[pos + 1:]
        table[reduced] = table.get(reduced, 0.0) + value
    # rebuild in canonical enumeration order so output is deterministic
    ordered = {c: table[c] for c in itertools.product(*states)}
    return Factor(scope, states, ordered)


def restrict(f: Factor, var: str, state: str) -> Factor:
    """Condition a factor on var = state, dropping var from the scope."""
    if var not in f.scope:
        return f
    pos = f.scope.index(var)
    scope = f.scope[:pos] + f.scope[pos + 1:]
    states = f.states[:pos] + f.states[pos + 1:]
    table = {}
    for combo, value in f.table.items():
        if combo[pos] == state:
            table[combo[:pos] + combo[pos + 1:]] = value
    ordered = {c: table[c] for c in itertools.product(*states)}
    return Factor(scope, states, ordered)


def _elimination_order(factors, to_eliminate):
    """Greedy fewest-resulting-scope-first order, lexicographic tie-break."""
    order = []
    factors = list(factors)
    remaining = set(to_eliminate)
    while remaining:
        best = None
        for var in sorted(remaining):
            scope = set()
            for f in factors:
                if var in f.scope:
                    scope.update(f.scope)
            scope.discard(var)
            key = (len(scope), var)
            if best is None or key < best[0]:
                best = (key, var, scope)
        _, var, scope = best
        order.append(var)
        remaining.discard(var)
        factors = [f for f in factors if var not in f.scope]
        if scope:
            factors.append(Factor(tuple(sorted(scope)),
                                  tuple(() for _ in scope), {}))
    return order


def marginal_ve(net: BayesianNetwork, target: str,
                evidence: dict[str, str] | None = None) -> dict[str, float]:
    """P(target | evidence) by variable elimination.

    Deterministic contract: CPT factors are created in network variable
    order, evidence is applied up front, and the elimination order is
    fewest-resulting-scope-first with lexicographic tie-break, so repeated
    runs are bit-identical.
    """
    _require_valid(net)
    evidence = dict(evidence or {})
    _check_query(net, target, evidence)
    target_states = net.variable_map()[target].states

    factors = [factor_from_cpt(net, v.id) for v in net.variables]
    for var, state in evidence.items():
        factors = [restrict(f, var, state) for f in factors]

    keep = {target} | set(evidence)
    to_eliminate = [v.id for v in net.variables if v.id not in keep]
    for var in _elimination_order(factors, to_eliminate):
        relevant = [f for f in factors if var in f.scope]
        if not relevant:
            continue
        product = relevant[0]
        for f in relevant[1:]:
            product = factor_product(product, f)
        factors = [f for f in factors if var not in f.scope]
        factors.append(sum_out(product, var))

    result = unit_factor()
    for f in factors:
        result = factor_product(result, f)

    if target in evidence:
        normalizer = result.table[()] if result.scope == () else sum(
            result.table.values())
        if normalizer <= 0.0:
            raise ImpossibleEvidenceError(evidence)
        return {s: (1.0 if s == evidence[target] else 0.0) for s in target_states}

    totals = {s: 0.0 for s in target_states}
    pos = result.scope.index(target)
    for combo, value in result.table.items():
        totals[combo[pos]] += value
    normalizer = sum(totals.values())
    if normalizer <= 0.0:
        raise ImpossibleEvidenceError(evidence)
    return {s: totals[s] / normalizer for s in target_states}
