"""Sensitivity sweeps, architecture comparison, crossing detection.

A sweep writes the same grid value t into one or more selected CPT rows of
a working copy of the network and reads off the high-state marginal of a
query variable. Grid values are computed as from + i*step with integer i
(never accumulated addition), so a [0,1] sweep at step 0.01 hits exactly
101 points ending at 1.0.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .bn import BayesianNetwork, Cpt, HIGH, marginal_ve
from .errors import UsageError

ALL_ROWS = "all"  # row selector wildcard


@dataclass(frozen=True)
class SweepSpec:
    targets: tuple[tuple[str, str], ...]  # (variable id, row key or ALL_ROWS)
    query: str
    evidence: dict[str, str] = field(default_factory=dict)
    start: float = 0.0
    stop: float = 1.0
    step: float = 0.01

    def __post_init__(self):
        if not self.targets:
            raise UsageError("sweep needs at least one (variable, row) target")
        if not (0.0 <= self.start < self.stop <= 1.0):
            raise UsageError(
                f"sweep range must satisfy 0 <= from < to <= 1, "
                f"got [{self.start}, {self.stop}]")
        if self.step <= 0:
            raise UsageError(f"step must be positive, got {self.step!r}")
        intervals = (self.stop - self.start) / self.step
        if abs(intervals - round(intervals)) > 1e-9:
            raise UsageError(
                f"step {self.step} does not divide the range "
                f"[{self.start}, {self.stop}] into whole intervals")

    @property
    def grid(self):
        n = round((self.stop - self.start) / self.step)
        return [self.start + i * self.step for i in range(n + 1)]


@dataclass(frozen=True)
class SweepResult:
    points: tuple[tuple[float, float], ...]  # (t, p_high), ascending t
    spec: SweepSpec
    network_name: str = ""


@dataclass(frozen=True)
class Crossing:
    t_low: float
    t_high: float
    estimate: float  # linear-interpolated crossing location
    direction: str   # "a_falls_below_b" | "a_rises_above_b"


@dataclass(frozen=True)
class ComparisonResult:
    sweep_a: SweepResult
    sweep_b: SweepResult
    crossings: tuple[Crossing, ...]
    delta_start: float  # p_a - p_b at the first grid point
    delta_end: float    # and at the last

    @property
    def deltas(self):
        return [pa - pb for (_, pa), (_, pb) in
                zip(self.sweep_a.points, self.sweep_b.points)]


def evaluate(net: BayesianNetwork, target: str,
             evidence: dict[str, str] | None = None) -> float:
    """P(target = H | evidence)."""
    return marginal_ve(net, target, evidence)[HIGH]


def _resolve_rows(net: BayesianNetwork, spec: SweepSpec):
    """Expand selectors to concrete (variable, row key) pairs."""
    resolved = []
    for var, selector in spec.targets:
        cpt = net.cpts.get(var)
        if cpt is None:
            raise UsageError(f"sweep selector names unknown variable {var!r}")
        if selector == ALL_ROWS:
            keys = cpt.expected_keys()
        else:
            if selector not in cpt.rows:
                raise UsageError(
                    f"sweep selector {var}@{selector!r}: no such CPT row "
                    f"(rows: {cpt.expected_keys()})")
            keys = [selector]
        if not keys:
            raise UsageError(f"sweep selector {var}@{selector!r} selects no rows")
        resolved.extend((var, k) for k in keys)
    return resolved


def _with_rows(net: BayesianNetwork, rows, t: float) -> BayesianNetwork:
    cpts = dict(net.cpts)
    by_var = {}
    for var, key in rows:
        by_var.setdefault(var, []).append(key)
    for var, keys in by_var.items():
        old = cpts[var]
        new_rows = dict(old.rows)
        for key in keys:
            new_rows[key] = t
        cpts[var] = Cpt(old.variable, old.parents, new_rows)
    return replace(net, cpts=cpts)


def sweep(net: BayesianNetwork, spec: SweepSpec,
          network_name: str = "") -> SweepResult:
    """Evaluate the query marginal along the grid; the input network is
    never mutated."""
    rows = _resolve_rows(net, spec)
    points = []
    for t in spec.grid:
        working = _with_rows(net, rows, t)
        points.append((t, evaluate(working, spec.query, spec.evidence)))
    return SweepResult(tuple(points), spec, network_name)


def find_crossings(curve_a, curve_b) -> list[Crossing]:
    """Sign changes of (p_a - p_b) over a shared grid.

    A strict sign flip between consecutive points yields an interpolated
    crossing; an exact zero at a grid point counts only if the signs on
    either side differ (a tangential touch is not a crossing).
    """
    grid_a = [t for t, _ in curve_a]
    grid_b = [t for t, _ in curve_b]
    if grid_a != grid_b:
        raise UsageError("find_crossings: curves are on different grids")
    if any(b <= a for a, b in zip(grid_a, grid_a[1:])):
        raise UsageError("find_crossings: grid must be strictly increasing")

    deltas = [pa - pb for (_, pa), (_, pb) in zip(curve_a, curve_b)]
    nonzero = [i for i, d in enumerate(deltas) if d != 0.0]
    crossings = []
    for j, i in zip(nonzero, nonzero[1:]):
        dj, di = deltas[j], deltas[i]
        if (dj > 0) == (di > 0):
            continue
        t_low, t_high = grid_a[j], grid_a[i]
        if i == j + 1:
            estimate = t_low + (t_high - t_low) * dj / (dj - di)
        else:
            # the curve sits exactly on zero between j and i
            zero_run = grid_a[j + 1:i]
            estimate = sum(zero_run) / len(zero_run)
        direction = "a_falls_below_b" if dj > 0 else "a_rises_above_b"
        crossings.append(Crossing(t_low, t_high, estimate, direction))
    return crossings


def compare(net_a: BayesianNetwork, net_b: BayesianNetwork, spec: SweepSpec,
            name_a: str = "A", name_b: str = "B") -> ComparisonResult:
    """Sweep both networks on the same grid and locate where one overtakes
    the other."""
    for net, name in ((net_a, name_a), (net_b, name_b)):
        try:
            _resolve_rows(net, spec)
        except UsageError as exc:
            raise UsageError(f"network {name!r}: {exc}") from exc
    sweep_a = sweep(net_a, spec, name_a)
    sweep_b = sweep(net_b, spec, name_b)
    crossings = find_crossings(sweep_a.points, sweep_b.points)
    deltas = [pa - pb for (_, pa), (_, pb) in
              zip(sweep_a.points, sweep_b.points)]
    return ComparisonResult(sweep_a, sweep_b, tuple(crossings),
                            deltas[0], deltas[-1])
