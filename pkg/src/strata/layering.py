"""Generational layer assignment driven by a hierarchy specification.

Co-level groups (spouses by default) are merged into clusters first. The
cluster graph induced by generational edges is then layered by longest
path from its sources, which yields the pointwise-smallest assignment
satisfying every constraint: sources sit at layer 0, every generational
edge descends at least one layer, co-level endpoints share a layer.

Cycles in the cluster graph are either rejected or broken at the back
edges found by a canonical-order depth-first traversal; broken edges are
reported on the result, never dropped silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .errors import CycleError, SpecError
from .model import PARENT_OF, SPOUSE_OF, GraphDataset, Relation

GENERATIONAL = "generational"
CO_LEVEL = "co_level"
FREE = "free"


@dataclass(frozen=True)
class HierarchySpec:
    """Partition of relation kinds into layer roles.

    Kinds in ``generational_kinds`` push their target at least one layer
    below their source; kinds in ``co_level_kinds`` force both endpoints
    onto one layer. Every kind listed in neither set is free and adds no
    constraint, so the third role needs no explicit field.
    """

    generational_kinds: frozenset[str] = frozenset({PARENT_OF})
    co_level_kinds: frozenset[str] = frozenset({SPOUSE_OF})

    def __post_init__(self) -> None:
        object.__setattr__(self, "generational_kinds", frozenset(self.generational_kinds))
        object.__setattr__(self, "co_level_kinds", frozenset(self.co_level_kinds))
        overlap = self.generational_kinds & self.co_level_kinds
        if overlap:
            raise SpecError(f"kinds cannot be both generational and co-level: {sorted(overlap)}")

    def role(self, kind: str) -> str:
        if kind in self.generational_kinds:
            return GENERATIONAL
        if kind in self.co_level_kinds:
            return CO_LEVEL
        return FREE


class CyclePolicy(Enum):
    REJECT = "reject"
    BREAK_BACK_EDGES = "break_back_edges"


@dataclass(frozen=True)
class LayerAssignment:
    """Person id -> layer index, compact over [0, layer_count)."""

    layer_of: Mapping[str, int]
    layer_count: int
    broken_edges: tuple[Relation, ...] = ()


def co_level_clusters(dataset: GraphDataset, spec: HierarchySpec) -> tuple[tuple[str, ...], ...]:
    """Connected components of the co-level subgraph; singletons for
    unlinked persons. Clusters are ordered by their smallest member's
    canonical index, members likewise."""
    n = len(dataset.persons)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    index_of = dataset.index_of
    for rel in dataset.relations:
        if spec.role(rel.kind) != CO_LEVEL:
            continue
        a, b = find(index_of[rel.source]), find(index_of[rel.target])
        if a != b:
            # anchor at the smaller index so representatives are canonical
            lo, hi = (a, b) if a < b else (b, a)
            parent[hi] = lo

    members: dict[int, list[str]] = {}
    for i, person in enumerate(dataset.persons):
        members.setdefault(find(i), []).append(person.id)
    return tuple(tuple(members[root]) for root in sorted(members))


def _cluster_graph(
    dataset: GraphDataset, spec: HierarchySpec, clusters: tuple[tuple[str, ...], ...]
) -> tuple[dict[str, int], list[list[int]], dict[tuple[int, int], list[Relation]]]:
    cluster_of: dict[str, int] = {}
    for ci, cluster in enumerate(clusters):
        for pid in cluster:
            cluster_of[pid] = ci
    adjacency: list[list[int]] = [[] for _ in clusters]
    seen: set[tuple[int, int]] = set()
    edge_relations: dict[tuple[int, int], list[Relation]] = {}
    for rel in dataset.relations:
        if spec.role(rel.kind) != GENERATIONAL:
            continue
        cu, cv = cluster_of[rel.source], cluster_of[rel.target]
        if cu == cv:
            raise SpecError(
                f"generational edge {rel.source}->{rel.target} joins two persons "
                "of one co-level cluster; the constraints contradict"
            )
        edge_relations.setdefault((cu, cv), []).append(rel)
        if (cu, cv) not in seen:
            seen.add((cu, cv))
            adjacency[cu].append(cv)
    return cluster_of, adjacency, edge_relations


def _find_back_edges(
    adjacency: list[list[int]], policy: CyclePolicy, clusters: tuple[tuple[str, ...], ...]
) -> set[tuple[int, int]]:
    """Depth-first traversal in canonical order; returns the back edges.
    With REJECT, the first back edge raises with one offending cycle,
    spelled with each cluster's first (canonical) member."""
    n = len(adjacency)
    color = [0] * n  # 0 unvisited, 1 on stack, 2 done
    removed: set[tuple[int, int]] = set()
    for root in range(n):
        if color[root]:
            continue
        stack: list[tuple[int, int]] = [(root, 0)]
        path: list[int] = [root]
        color[root] = 1
        while stack:
            node, edge_pos = stack[-1]
            if edge_pos < len(adjacency[node]):
                stack[-1] = (node, edge_pos + 1)
                nxt = adjacency[node][edge_pos]
                if (node, nxt) in removed:
                    continue
                if color[nxt] == 0:
                    color[nxt] = 1
                    stack.append((nxt, 0))
                    path.append(nxt)
                elif color[nxt] == 1:
                    if policy is CyclePolicy.REJECT:
                        loop = path[path.index(nxt):]
                        raise CycleError([clusters[c][0] for c in loop])
                    removed.add((node, nxt))
            else:
                stack.pop()
                path.pop()
                color[node] = 2
    return removed


def assign_layers(
    dataset: GraphDataset,
    spec: HierarchySpec,
    policy: CyclePolicy = CyclePolicy.REJECT,
) -> LayerAssignment:
    """Layer every person. See the module docstring for the rule."""
    clusters = co_level_clusters(dataset, spec)
    cluster_of, adjacency, edge_relations = _cluster_graph(dataset, spec, clusters)
    removed = _find_back_edges(adjacency, policy, clusters)

    broken: list[Relation] = []
    if removed:
        for rel in dataset.relations:
            if spec.role(rel.kind) != GENERATIONAL:
                continue
            if (cluster_of[rel.source], cluster_of[rel.target]) in removed:
                broken.append(rel)

    n = len(clusters)
    indegree = [0] * n
    for u in range(n):
        for v in adjacency[u]:
            if (u, v) not in removed:
                indegree[v] += 1
    layer = [0] * n
    queue = [c for c in range(n) if indegree[c] == 0]
    head = 0
    while head < len(queue):
        u = queue[head]
        head += 1
        for v in adjacency[u]:
            if (u, v) in removed:
                continue
            if layer[u] + 1 > layer[v]:
                layer[v] = layer[u] + 1
            indegree[v] -= 1
            if indegree[v] == 0:
                queue.append(v)

    layer_of = {pid: layer[cluster_of[pid]] for pid in dataset.ids}
    raw = LayerAssignment(
        layer_of=layer_of,
        layer_count=(max(layer) + 1) if layer else 0,
        broken_edges=tuple(broken),
    )
    return compact_layers(raw)


def compact_layers(raw: LayerAssignment) -> LayerAssignment:
    """Order-preserving relabel onto [0, L) with no empty index."""
    values = sorted(set(raw.layer_of.values()))
    rank = {v: i for i, v in enumerate(values)}
    return LayerAssignment(
        layer_of={pid: rank[v] for pid, v in raw.layer_of.items()},
        layer_count=len(values),
        broken_edges=raw.broken_edges,
    )
