"""Layout-quality metrics, structural measures, and exploration queries.

All functions here are pure and deterministic. Degree and neighborhood
semantics ignore edge direction throughout: "who knew whom" is symmetric
even when the recorded relation is not.
"""

from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .engine import Layout, LayoutConfig, LayoutMode, run, DEFAULT_LINK_LENGTH
from .errors import UnknownNodeError
from .layering import HierarchySpec, LayerAssignment, assign_layers
from .model import GraphDataset, Person, Relation


@dataclass(frozen=True)
class QualityReport:
    node_count: int
    edge_count: int
    edge_crossings: int
    node_overlaps: int
    stress: float
    layer_violation: float | None
    bridge_nodes: tuple[str, ...]
    mode: str
    runtime_ms: int

    def to_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "edge_crossings": self.edge_crossings,
            "node_overlaps": self.node_overlaps,
            "stress": self.stress,
            "layer_violation": self.layer_violation,
            "bridge_nodes": list(self.bridge_nodes),
            "mode": self.mode,
            "runtime_ms": self.runtime_ms,
        }


# --- exact segment crossings --------------------------------------------------

# Shewchuk's static filter bound for the 2x2 determinant sign.
_ORIENT_ERR = 3.3306690738754716e-16


def _orient(ax: float, ay: float, bx: float, by: float, cx: float, cy: float) -> int:
    """Sign of the cross product (b-a) x (c-a). Float fast path with an
    error filter, exact rational fallback, so the decision is never a
    rounding artifact."""
    detleft = (bx - ax) * (cy - ay)
    detright = (by - ay) * (cx - ax)
    det = detleft - detright
    bound = _ORIENT_ERR * (abs(detleft) + abs(detright))
    if det > bound:
        return 1
    if -det > bound:
        return -1
    exact = (Fraction(bx) - Fraction(ax)) * (Fraction(cy) - Fraction(ay)) - (
        Fraction(by) - Fraction(ay)
    ) * (Fraction(cx) - Fraction(ax))
    return (exact > 0) - (exact < 0)


def _segments_cross(
    p1: tuple[float, float], p2: tuple[float, float],
    p3: tuple[float, float], p4: tuple[float, float],
) -> bool:
    """True when the relative interiors of the two segments intersect.
    Collinear overlapping segments count (they occlude one another)."""
    o1 = _orient(*p1, *p2, *p3)
    o2 = _orient(*p1, *p2, *p4)
    o3 = _orient(*p3, *p4, *p1)
    o4 = _orient(*p3, *p4, *p2)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and o2 == 0 and o3 == 0 and o4 == 0:
        # collinear: open 1D intervals on the dominant axis must overlap
        if abs(p2[0] - p1[0]) >= abs(p2[1] - p1[1]):
            a1, a2 = sorted((p1[0], p2[0]))
            b1, b2 = sorted((p3[0], p4[0]))
        else:
            a1, a2 = sorted((p1[1], p2[1]))
            b1, b2 = sorted((p3[1], p4[1]))
        return max(a1, b1) < min(a2, b2)
    return False


def edge_crossings(layout: Layout, dataset: GraphDataset) -> int:
    """Number of unordered relation pairs whose straight segments properly
    intersect. Pairs sharing an endpoint never count."""
    index_of = dataset.index_of
    segments = []
    for rel in dataset.relations:
        s, t = index_of[rel.source], index_of[rel.target]
        segments.append((rel.source, rel.target, layout.positions[s], layout.positions[t]))
    count = 0
    for a in range(len(segments)):
        sa, ta, p1, p2 = segments[a]
        ax_lo, ax_hi = min(p1[0], p2[0]), max(p1[0], p2[0])
        ay_lo, ay_hi = min(p1[1], p2[1]), max(p1[1], p2[1])
        for b in range(a + 1, len(segments)):
            sb, tb, p3, p4 = segments[b]
            if sa in (sb, tb) or ta in (sb, tb):
                continue
            if max(p3[0], p4[0]) < ax_lo or min(p3[0], p4[0]) > ax_hi:
                continue
            if max(p3[1], p4[1]) < ay_lo or min(p3[1], p4[1]) > ay_hi:
                continue
            if _segments_cross(p1, p2, p3, p4):
                count += 1
    return count


def node_overlaps(layout: Layout, radius: float) -> int:
    """Unordered node pairs closer than 2*radius - 1e-9, via an x-sweep."""
    if radius <= 0:
        raise ValueError("radius must be > 0")
    threshold = 2.0 * radius - 1e-9
    pts = sorted(layout.positions)
    count = 0
    for i in range(len(pts)):
        xi, yi = pts[i]
        for j in range(i + 1, len(pts)):
            xj, yj = pts[j]
            if xj - xi >= threshold:
                break
            dx = xj - xi
            dy = yj - yi
            if math.sqrt(dx * dx + dy * dy) < threshold:
                count += 1
    return count


def _neighbor_sets(dataset: GraphDataset) -> list[list[int]]:
    """Undirected adjacency over all relation kinds, deduplicated, each
    list in canonical order."""
    index_of = dataset.index_of
    n = len(dataset.persons)
    seen: list[set[int]] = [set() for _ in range(n)]
    for rel in dataset.relations:
        s, t = index_of[rel.source], index_of[rel.target]
        if s != t:
            seen[s].add(t)
            seen[t].add(s)
    return [sorted(nbrs) for nbrs in seen]


def stress(layout: Layout, dataset: GraphDataset, ideal_edge: float = DEFAULT_LINK_LENGTH) -> float:
    """Mean squared relative mismatch between geometric distance and
    ideal_edge times the graph distance, over same-component pairs."""
    if ideal_edge <= 0:
        raise ValueError("ideal_edge must be > 0")
    adjacency = _neighbor_sets(dataset)
    n = len(adjacency)
    total = 0.0
    pairs = 0
    for i in range(n):
        dist = [-1] * n
        dist[i] = 0
        queue = deque([i])
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        xi, yi = layout.positions[i]
        for j in range(i + 1, n):
            g = dist[j]
            if g <= 0:
                continue
            xj, yj = layout.positions[j]
            geometric = math.hypot(xi - xj, yi - yj)
            want = ideal_edge * g
            total += ((geometric - want) / want) ** 2
            pairs += 1
    return total / pairs if pairs else 0.0


def layer_violation(
    layout: Layout, assignment: LayerAssignment, band_height: float, margin: float
) -> float:
    """Worst |y - band center| over all nodes; 0 means perfectly layered."""
    worst = 0.0
    for pid, (_, y) in zip(layout.ids, layout.positions):
        target = margin + (assignment.layer_of[pid] + 0.5) * band_height
        worst = max(worst, abs(y - target))
    return worst


def bridge_nodes(dataset: GraphDataset) -> tuple[str, ...]:
    """Articulation points of the undirected graph over all relation
    kinds, by iterative depth-first low-link, in canonical order."""
    adjacency = _neighbor_sets(dataset)
    n = len(adjacency)
    disc = [-1] * n
    low = [0] * n
    is_cut = [False] * n
    counter = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        root_children = 0
        stack: list[tuple[int, int, int]] = [(root, -1, 0)]
        while stack:
            node, parent, pos = stack[-1]
            if pos == 0:
                disc[node] = low[node] = counter
                counter += 1
            if pos < len(adjacency[node]):
                stack[-1] = (node, parent, pos + 1)
                nxt = adjacency[node][pos]
                if nxt == parent:
                    continue
                if disc[nxt] >= 0:
                    low[node] = min(low[node], disc[nxt])
                else:
                    stack.append((nxt, node, 0))
            else:
                stack.pop()
                if parent >= 0:
                    low[parent] = min(low[parent], low[node])
                    if parent == root:
                        root_children += 1
                    elif low[node] >= disc[parent]:
                        is_cut[parent] = True
        if root_children > 1:
            is_cut[root] = True
    return tuple(dataset.persons[i].id for i in range(n) if is_cut[i])


def most_connected(dataset: GraphDataset) -> tuple[str, ...]:
    """Person(s) of maximum degree; every incident relation counts once."""
    if not dataset.persons:
        raise ValueError("dataset has no persons")
    index_of = dataset.index_of
    degree = [0] * len(dataset.persons)
    for rel in dataset.relations:
        degree[index_of[rel.source]] += 1
        degree[index_of[rel.target]] += 1
    top = max(degree)
    return tuple(p.id for i, p in enumerate(dataset.persons) if degree[i] == top)


def common_neighbors(dataset: GraphDataset, a: str, b: str) -> set[str]:
    """Everyone linked to both a and b (any kind, either direction)."""
    index_of = dataset.index_of
    for pid in (a, b):
        if pid not in index_of:
            raise UnknownNodeError(f"no person with id {pid!r}")
    if a == b:
        raise ValueError("common_neighbors needs two distinct persons")
    adjacency = _neighbor_sets(dataset)
    shared = set(adjacency[index_of[a]]) & set(adjacency[index_of[b]])
    shared -= {index_of[a], index_of[b]}
    return {dataset.persons[i].id for i in shared}


def snapshot_at_year(dataset: GraphDataset, year: int) -> GraphDataset:
    """Sub-dataset of persons alive in the given year. Persons with absent
    dates are kept rather than dropped; the meta records how many kept
    persons were missing a date, so gaps stay visible."""
    kept: list[Person] = []
    undated = 0
    for p in dataset.persons:
        if p.birth_year is not None and p.birth_year > year:
            continue
        if p.death_year is not None and p.death_year < year:
            continue
        kept.append(p)
        if p.birth_year is None or p.death_year is None:
            undated += 1
    kept_ids = {p.id for p in kept}
    relations = tuple(
        r for r in dataset.relations if r.source in kept_ids and r.target in kept_ids
    )
    meta = dict(dataset.meta)
    meta["snapshot_year"] = str(year)
    meta["undated_included"] = str(undated)
    return GraphDataset(persons=tuple(kept), relations=relations, meta=meta)


# --- comparison ----------------------------------------------------------------


def build_report(
    layout: Layout,
    dataset: GraphDataset,
    assignment: LayerAssignment | None = None,
    ideal_edge: float = DEFAULT_LINK_LENGTH,
    runtime_ms: int = 0,
) -> QualityReport:
    config = layout.config
    violation = None
    if assignment is not None:
        violation = layer_violation(layout, assignment, config.band_height, config.margin)
    return QualityReport(
        node_count=len(dataset.persons),
        edge_count=len(dataset.relations),
        edge_crossings=edge_crossings(layout, dataset),
        node_overlaps=node_overlaps(layout, config.collision_radius),
        stress=stress(layout, dataset, ideal_edge),
        layer_violation=violation,
        bridge_nodes=bridge_nodes(dataset),
        mode=layout.mode.value,
        runtime_ms=runtime_ms,
    )


@dataclass(frozen=True)
class ComparisonResult:
    fd_layout: Layout
    fl_layout: Layout
    fd_report: QualityReport
    fl_report: QualityReport

    def table(self) -> str:
        """Aligned plain-text comparison, stable row and column order."""
        rows: list[tuple[str, str, str]] = [("metric", "force_directed", "force_layered")]
        fd, fl = self.fd_report, self.fl_report

        def fmt(value) -> str:
            if value is None:
                return "-"
            if isinstance(value, float):
                return f"{value:.6f}"
            return str(value)

        rows.append(("node_count", fmt(fd.node_count), fmt(fl.node_count)))
        rows.append(("edge_count", fmt(fd.edge_count), fmt(fl.edge_count)))
        rows.append(("edge_crossings", fmt(fd.edge_crossings), fmt(fl.edge_crossings)))
        rows.append(("node_overlaps", fmt(fd.node_overlaps), fmt(fl.node_overlaps)))
        rows.append(("stress", fmt(fd.stress), fmt(fl.stress)))
        rows.append(("layer_violation", fmt(fd.layer_violation), fmt(fl.layer_violation)))
        rows.append(("bridge_nodes", " ".join(fd.bridge_nodes) or "-", " ".join(fl.bridge_nodes) or "-"))
        rows.append(("ticks", fmt(self.fd_layout.ticks_run), fmt(self.fl_layout.ticks_run)))
        widths = [max(len(r[c]) for r in rows) for c in range(3)]
        lines = ["  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip() for row in rows]
        return "\n".join(lines) + "\n"


def compare_report(
    dataset: GraphDataset,
    config_fd: LayoutConfig,
    config_fl: LayoutConfig,
    spec: HierarchySpec | None = None,
) -> ComparisonResult:
    """Run both modes on one dataset with a shared seed and report every
    metric for each. The layered assignment is also used to score the
    unconstrained layout, which is what makes the two comparable."""
    if config_fd.mode is not LayoutMode.FORCE_DIRECTED:
        raise ValueError("config_fd must be force_directed")
    if config_fl.mode is not LayoutMode.FORCE_LAYERED:
        raise ValueError("config_fl must be force_layered")
    if config_fd.seed != config_fl.seed:
        raise ValueError("comparison requires a shared seed")
    spec = spec or HierarchySpec()
    assignment = assign_layers(dataset, spec) if dataset.persons else LayerAssignment({}, 0)

    started = time.perf_counter()
    fd_layout = run(dataset, config_fd)
    fd_ms = int((time.perf_counter() - started) * 1000)
    started = time.perf_counter()
    fl_layout = run(dataset, config_fl, layers=assignment)
    fl_ms = int((time.perf_counter() - started) * 1000)

    fd_report = build_report(fd_layout, dataset, assignment, runtime_ms=fd_ms)
    fl_report = build_report(fl_layout, dataset, assignment, runtime_ms=fl_ms)
    return ComparisonResult(fd_layout, fl_layout, fd_report, fl_report)
