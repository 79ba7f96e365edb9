"""Deterministic force simulation with an optional generational-band constraint.

Two modes share one integrator. ``force_directed`` runs springs, charge
repulsion, collision separation and centering on both axes; this is the
classic unconstrained picture. ``force_layered`` confines vertical motion
to the band owned by each node's layer: a spring toward the band center
stiffens as the system cools, and a terminal snap pass makes band
membership exact, so every generational edge in the output points
strictly downward. Roots sit in the top band and y grows downward.

Determinism is a hard contract. All randomness flows through the portable
Lcg, forces are applied in a fixed documented order per tick

    link -> repulsion -> collision -> centering -> band -> integrate

and the hot path is plain float arithmetic, so repeated runs reproduce
positions bit for bit. Alpha anneals geometrically: each tick applies
alpha <- alpha + (0 - alpha) * alpha_decay and the run stops when alpha
drops below alpha_min or the tick limit is reached.

Force laws, for the record (deg = number of incident relations):

  LINK       per edge (s,t), rest length L: delta = (p_t+v_t) - (p_s+v_s),
             f = (|delta| - L)/|delta| * alpha / min(deg_s, deg_t),
             bias b = deg_s/(deg_s+deg_t); v_t -= delta*f*b,
             v_s += delta*f*(1-b). A coincident pair gets a seeded jitter
             delta of magnitude 1e-6 instead of dividing by zero.
  REPULSION  on i from j: magnitude strength * alpha / max(|d|, 1)^2 along
             (p_i - p_j), accumulated through a Barnes-Hut quadtree.
  COLLISION  pairs closer than 2*collision_radius are displaced apart by
             0.7 * overlap/2 each, sequentially in canonical pair order.
  CENTERING  translate so the centroid sits at the canvas center (x only
             in layered mode; y is owned by the bands).
  BAND       v_y += (band_center - y) * k * alpha with stiffness
             k = floor + (1 - floor) * (1 - alpha), layered mode only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping, Sequence

from .errors import ConfigError, NumericalError, UnknownNodeError
from .layering import LayerAssignment
from .model import GraphDataset
from .rng import Lcg

DEFAULT_LINK_LENGTH = 60.0


class LayoutMode(Enum):
    FORCE_DIRECTED = "force_directed"
    FORCE_LAYERED = "force_layered"


@dataclass(frozen=True)
class LayoutConfig:
    mode: LayoutMode = LayoutMode.FORCE_DIRECTED
    seed: int = 11
    canvas_width: float = 1200.0
    band_height: float = 120.0
    margin: float = 40.0
    link_length: Mapping[str, float] = field(default_factory=lambda: {"godparent_of": 90.0})
    repulsion_strength: float = 30.0
    collision_radius: float = 12.0
    theta: float = 0.9
    alpha_start: float = 1.0
    alpha_min: float = 0.001
    alpha_decay: float = 0.0228
    damping: float = 0.6
    band_stiffness_floor: float = 0.1
    tick_limit: int = 1000

    def rest_length(self, kind: str) -> float:
        return self.link_length.get(kind, DEFAULT_LINK_LENGTH)

    def validate(self) -> None:
        checks = [
            (self.canvas_width > 0, "canvas_width must be > 0"),
            (self.band_height > 0, "band_height must be > 0"),
            (self.margin > 0, "margin must be > 0"),
            (self.collision_radius > 0, "collision_radius must be > 0"),
            (all(v > 0 for v in self.link_length.values()), "link lengths must be > 0"),
            (0.0 <= self.theta <= 1.0, "theta must be in [0, 1]"),
            (0.0 < self.alpha_decay < 1.0, "alpha_decay must be in (0, 1)"),
            (0.0 < self.damping <= 1.0, "damping must be in (0, 1]"),
            (self.tick_limit >= 1, "tick_limit must be >= 1"),
            (self.alpha_start > 0, "alpha_start must be > 0"),
            (self.alpha_min > 0, "alpha_min must be > 0"),
            (0.0 <= self.band_stiffness_floor <= 1.0, "band_stiffness_floor must be in [0, 1]"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)

    def canvas_height(self, layer_count: int | None) -> float:
        """Layered canvases derive their height from the bands; the
        unconstrained canvas is square."""
        if self.mode is LayoutMode.FORCE_LAYERED:
            if layer_count is None:
                raise ConfigError("layered canvas height needs a layer count")
            return 2.0 * self.margin + max(layer_count, 1) * self.band_height
        return self.canvas_width

    def band_center(self, layer: int) -> float:
        return self.margin + (layer + 0.5) * self.band_height


def config_to_dict(config: LayoutConfig) -> dict:
    """Deterministic JSON-ready echo of a config."""
    return {
        "mode": config.mode.value,
        "seed": config.seed,
        "canvas_width": config.canvas_width,
        "band_height": config.band_height,
        "margin": config.margin,
        "link_length": {k: config.link_length[k] for k in sorted(config.link_length)},
        "repulsion_strength": config.repulsion_strength,
        "collision_radius": config.collision_radius,
        "theta": config.theta,
        "alpha_start": config.alpha_start,
        "alpha_min": config.alpha_min,
        "alpha_decay": config.alpha_decay,
        "damping": config.damping,
        "band_stiffness_floor": config.band_stiffness_floor,
        "tick_limit": config.tick_limit,
    }


def config_from_dict(values: Mapping, base: LayoutConfig | None = None) -> LayoutConfig:
    """Apply overrides onto a base config; unknown keys raise ConfigError."""
    base = base or LayoutConfig()
    allowed = set(config_to_dict(LayoutConfig()))
    unknown = set(values) - allowed
    if unknown:
        raise ConfigError(f"unknown config field {sorted(unknown)[0]!r}")
    kwargs: dict = {}
    for key, value in values.items():
        if key == "mode":
            try:
                value = LayoutMode(value)
            except ValueError:
                raise ConfigError(f"unknown mode {value!r}") from None
        kwargs[key] = value
    config = replace(base, **kwargs)
    config.validate()
    return config


@dataclass
class PositionState:
    """Mutable simulation state, canonical node order throughout."""

    ids: tuple[str, ...]
    x: list[float]
    y: list[float]
    vx: list[float]
    vy: list[float]
    pinned: dict[int, tuple[float, float]]
    alpha: float
    tick_count: int
    rng: Lcg

    def positions(self) -> tuple[tuple[float, float], ...]:
        return tuple(zip(self.x, self.y))


@dataclass(frozen=True)
class TraceEntry:
    tick: int
    alpha: float
    positions: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class Layout:
    ids: tuple[str, ...]
    positions: tuple[tuple[float, float], ...]
    mode: LayoutMode
    layers: LayerAssignment | None
    ticks_run: int
    final_alpha: float
    config: LayoutConfig
    trace: tuple[TraceEntry, ...] | None = None

    def position_of(self, person_id: str) -> tuple[float, float]:
        return self.positions[self.ids.index(person_id)]


class _SimIndex:
    """Precomputed per-run arrays: edge endpoints, rest lengths, degrees,
    link bias/strength, per-node band targets."""

    def __init__(
        self, dataset: GraphDataset, config: LayoutConfig, layers: LayerAssignment | None
    ) -> None:
        index_of = dataset.index_of
        n = len(dataset.persons)
        degree = [0] * n
        for rel in dataset.relations:
            degree[index_of[rel.source]] += 1
            degree[index_of[rel.target]] += 1
        edges: list[tuple[int, int, float, float, float]] = []
        for rel in dataset.relations:
            s, t = index_of[rel.source], index_of[rel.target]
            rest = config.rest_length(rel.kind)
            strength = 1.0 / min(degree[s], degree[t])
            bias = degree[s] / (degree[s] + degree[t])
            edges.append((s, t, rest, strength, bias))
        self.edges = edges
        self.degree = degree
        self.band_y: list[float] | None = None
        if config.mode is LayoutMode.FORCE_LAYERED:
            assert layers is not None
            self.band_y = [config.band_center(layers.layer_of[pid]) for pid in dataset.ids]
        self.height = config.canvas_height(layers.layer_count if layers else None)


def init_positions(
    dataset: GraphDataset, config: LayoutConfig, layers: LayerAssignment | None = None
) -> PositionState:
    """Seeded starting state. Unconstrained mode scatters nodes over the
    canvas; layered mode scatters x and jitters y inside each band."""
    config.validate()
    layered = config.mode is LayoutMode.FORCE_LAYERED
    if layered and layers is None:
        raise ConfigError("force_layered mode needs a layer assignment")
    rng = Lcg(config.seed)
    width = config.canvas_width
    height = config.canvas_height(layers.layer_count if layered else None)
    xs: list[float] = []
    ys: list[float] = []
    for pid in dataset.ids:
        u1 = rng.uniform()
        u2 = rng.uniform()
        xs.append(u1 * width)
        if layered:
            center = config.band_center(layers.layer_of[pid])
            ys.append(center + (u2 * 2.0 - 1.0) * config.band_height / 4.0)
        else:
            ys.append(u2 * height)
    n = len(xs)
    return PositionState(
        ids=dataset.ids,
        x=xs,
        y=ys,
        vx=[0.0] * n,
        vy=[0.0] * n,
        pinned={},
        alpha=config.alpha_start,
        tick_count=0,
        rng=rng,
    )


def pin(state: PositionState, node_id: str, position: tuple[float, float]) -> PositionState:
    """Fix a node at a position; subsequent ticks hold it there."""
    try:
        idx = state.ids.index(node_id)
    except ValueError:
        raise UnknownNodeError(f"no person with id {node_id!r}") from None
    px, py = float(position[0]), float(position[1])
    if not (math.isfinite(px) and math.isfinite(py)):
        raise ValueError("pin position must be finite")
    state.pinned[idx] = (px, py)
    state.x[idx] = px
    state.y[idx] = py
    state.vx[idx] = 0.0
    state.vy[idx] = 0.0
    return state


def unpin(state: PositionState, node_id: str) -> PositionState:
    """Release a pinned node; it resumes moving on the next tick."""
    try:
        idx = state.ids.index(node_id)
    except ValueError:
        raise UnknownNodeError(f"no person with id {node_id!r}") from None
    state.pinned.pop(idx, None)
    return state


# --- repulsion ---------------------------------------------------------------

_JITTER = 1e-6


def _coincident_delta(i: int, j: int) -> tuple[float, float]:
    """Stand-in separation for exactly coincident nodes: a unit direction
    hashed from the pair (antisymmetric in i,j) scaled to 1e-6. Keyed by
    the pair, not drawn from the shared stream, so the brute-force and
    tree paths see identical values."""
    lo, hi = (i, j) if i < j else (j, i)
    angle = 2.0 * math.pi * Lcg(lo * 2654435761 + hi * 40503 + 1).uniform()
    sign = 1.0 if i < j else -1.0
    return sign * math.cos(angle) * _JITTER, sign * math.sin(angle) * _JITTER


def repulsion_brute(state: PositionState, strength: float) -> list[tuple[float, float]]:
    """Exact O(n^2) pairwise repulsion, accumulated in canonical index
    order. The oracle the quadtree path is tested against."""
    xs, ys = state.x, state.y
    n = len(xs)
    alpha = state.alpha
    out: list[tuple[float, float]] = []
    for i in range(n):
        xi, yi = xs[i], ys[i]
        fx = fy = 0.0
        for j in range(n):
            if j == i:
                continue
            dx = xi - xs[j]
            dy = yi - ys[j]
            d2 = dx * dx + dy * dy
            if d2 == 0.0:
                dx, dy = _coincident_delta(i, j)
                d = _JITTER
            else:
                d = math.sqrt(d2)
            eff = d if d > 1.0 else 1.0
            mag = strength * alpha / (eff * eff) / d
            fx += dx * mag
            fy += dy * mag
        out.append((fx, fy))
    return out


class _QuadTree:
    """Square-region quadtree storing charge count, coordinate sums and
    (after build) centers of mass per cell. Coincident or depth-capped
    points chain inside one leaf and are always evaluated exactly."""

    __slots__ = ("cx", "cy", "half", "child", "points", "count", "sx", "sy", "comx", "comy")

    _MAX_DEPTH = 48

    def __init__(self, xs: Sequence[float], ys: Sequence[float]) -> None:
        n = len(xs)
        minx, maxx = min(xs), max(xs)
        miny, maxy = min(ys), max(ys)
        side = max(maxx - minx, maxy - miny, 1e-9) * 0.5 + 1e-9
        self.cx: list[float] = [(minx + maxx) * 0.5]
        self.cy: list[float] = [(miny + maxy) * 0.5]
        self.half: list[float] = [side]
        self.child: list[list[int] | None] = [None]
        self.points: list[list[int] | None] = [None]
        self.count: list[int] = [0]
        self.sx: list[float] = [0.0]
        self.sy: list[float] = [0.0]
        for i in range(n):
            self._insert(i, xs[i], ys[i], xs, ys)
        self.comx = [sx / c if c else 0.0 for sx, c in zip(self.sx, self.count)]
        self.comy = [sy / c if c else 0.0 for sy, c in zip(self.sy, self.count)]

    def _new_cell(self, cx: float, cy: float, half: float) -> int:
        self.cx.append(cx)
        self.cy.append(cy)
        self.half.append(half)
        self.child.append(None)
        self.points.append(None)
        self.count.append(0)
        self.sx.append(0.0)
        self.sy.append(0.0)
        return len(self.cx) - 1

    def _quadrant(self, cell: int, x: float, y: float) -> int:
        return (1 if x >= self.cx[cell] else 0) | (2 if y >= self.cy[cell] else 0)

    def _child_for(self, cell: int, quadrant: int) -> int:
        kids = self.child[cell]
        assert kids is not None
        if kids[quadrant] < 0:
            h = self.half[cell] * 0.5
            ox = self.cx[cell] + (h if quadrant & 1 else -h)
            oy = self.cy[cell] + (h if quadrant & 2 else -h)
            kids[quadrant] = self._new_cell(ox, oy, h)
        return kids[quadrant]

    def _insert(self, i: int, x: float, y: float, xs: Sequence[float], ys: Sequence[float]) -> None:
        cell = 0
        depth = 0
        while True:
            self.count[cell] += 1
            self.sx[cell] += x
            self.sy[cell] += y
            if self.child[cell] is not None:
                cell = self._child_for(cell, self._quadrant(cell, x, y))
                depth += 1
                continue
            pts = self.points[cell]
            if pts is None:
                self.points[cell] = [i]
                return
            first = pts[0]
            if depth >= self._MAX_DEPTH or (xs[first] == x and ys[first] == y):
                pts.append(i)
                return
            # split: push the resident points down, then retry this level
            self.child[cell] = [-1, -1, -1, -1]
            self.points[cell] = None
            for p in pts:
                sub = self._child_for(cell, self._quadrant(cell, xs[p], ys[p]))
                self.count[sub] += 1
                self.sx[sub] += xs[p]
                self.sy[sub] += ys[p]
                self.points[sub] = self.points[sub] or []
                self.points[sub].append(p)
            cell = self._child_for(cell, self._quadrant(cell, x, y))
            depth += 1


def repulsion_bh(state: PositionState, strength: float, theta: float) -> list[tuple[float, float]]:
    """Barnes-Hut approximation of :func:`repulsion_brute`. A cell is
    accepted whole when cell_width / distance-to-center-of-mass <= theta;
    theta 0 therefore descends to the exact pairwise computation."""
    if not 0.0 <= theta <= 1.0:
        raise ConfigError("theta must be in [0, 1]")
    xs, ys = state.x, state.y
    n = len(xs)
    if n == 0:
        return []
    alpha = state.alpha
    tree = _QuadTree(xs, ys)
    child, points, count = tree.child, tree.points, tree.count
    comx, comy, half = tree.comx, tree.comy, tree.half
    out: list[tuple[float, float]] = []
    for i in range(n):
        xi, yi = xs[i], ys[i]
        fx = fy = 0.0
        stack = [0]
        while stack:
            cell = stack.pop()
            kids = child[cell]
            if kids is None:
                pts = points[cell]
                if not pts:
                    continue
                for j in pts:
                    if j == i:
                        continue
                    dx = xi - xs[j]
                    dy = yi - ys[j]
                    d2 = dx * dx + dy * dy
                    if d2 == 0.0:
                        dx, dy = _coincident_delta(i, j)
                        d = _JITTER
                    else:
                        d = math.sqrt(d2)
                    eff = d if d > 1.0 else 1.0
                    mag = strength * alpha / (eff * eff) / d
                    fx += dx * mag
                    fy += dy * mag
                continue
            c = count[cell]
            if c == 0:
                continue
            dx = xi - comx[cell]
            dy = yi - comy[cell]
            d2 = dx * dx + dy * dy
            d = math.sqrt(d2)
            if d > 0.0 and (half[cell] * 2.0) / d <= theta:
                eff = d if d > 1.0 else 1.0
                mag = strength * c * alpha / (eff * eff) / d
                fx += dx * mag
                fy += dy * mag
                continue
            for q in (3, 2, 1, 0):  # pop order 0..3
                k = kids[q]
                if k >= 0:
                    stack.append(k)
        out.append((fx, fy))
    return out


# --- integration -------------------------------------------------------------


def tick(
    state: PositionState,
    dataset: GraphDataset,
    config: LayoutConfig,
    layers: LayerAssignment | None = None,
    sim_index: _SimIndex | None = None,
) -> PositionState:
    """One integration step, mutating and returning the state."""
    index = sim_index or _SimIndex(dataset, config, layers)
    layered = config.mode is LayoutMode.FORCE_LAYERED
    xs, ys, vxs, vys = state.x, state.y, state.vx, state.vy
    n = len(xs)

    state.alpha += (0.0 - state.alpha) * config.alpha_decay
    alpha = state.alpha

    # link springs
    rng = state.rng
    for s, t, rest, strength, bias in index.edges:
        dx = (xs[t] + vxs[t]) - (xs[s] + vxs[s])
        dy = (ys[t] + vys[t]) - (ys[s] + vys[s])
        d = math.sqrt(dx * dx + dy * dy)
        if d == 0.0:
            angle = 2.0 * math.pi * rng.uniform()
            dx = math.cos(angle) * _JITTER
            dy = math.sin(angle) * _JITTER
            d = _JITTER
        f = (d - rest) / d * alpha * strength
        vxs[t] -= dx * f * bias
        vys[t] -= dy * f * bias
        vxs[s] += dx * f * (1.0 - bias)
        vys[s] += dy * f * (1.0 - bias)

    # charge repulsion through the quadtree
    if n > 1:
        forces = repulsion_bh(state, config.repulsion_strength, config.theta)
        for i in range(n):
            fx, fy = forces[i]
            vxs[i] += fx
            vys[i] += fy

    # collision separation, sequential in canonical pair order
    min_sep = 2.0 * config.collision_radius
    for i in range(n - 1):
        for j in range(i + 1, n):
            dx = xs[i] - xs[j]
            dy = ys[i] - ys[j]
            d = math.sqrt(dx * dx + dy * dy)
            if d >= min_sep:
                continue
            if d == 0.0:
                dx, dy = _coincident_delta(i, j)
                d = _JITTER
            shift = 0.7 * (min_sep - d) * 0.5
            ux, uy = dx / d, dy / d
            xs[i] += ux * shift
            ys[i] += uy * shift
            xs[j] -= ux * shift
            ys[j] -= uy * shift

    # centering translation
    if n:
        offset_x = config.canvas_width * 0.5 - sum(xs) / n
        for i in range(n):
            xs[i] += offset_x
        if not layered:
            offset_y = index.height * 0.5 - sum(ys) / n
            for i in range(n):
                ys[i] += offset_y

    # band spring, stiffening as the system cools
    if layered:
        assert index.band_y is not None
        k = config.band_stiffness_floor + (1.0 - config.band_stiffness_floor) * (1.0 - alpha)
        for i in range(n):
            vys[i] += (index.band_y[i] - ys[i]) * k * alpha

    # integrate
    damping = config.damping
    pinned = state.pinned
    for i in range(n):
        pin_at = pinned.get(i)
        if pin_at is not None:
            xs[i], ys[i] = pin_at
            vxs[i] = 0.0
            vys[i] = 0.0
        else:
            vxs[i] *= damping
            vys[i] *= damping
            xs[i] += vxs[i]
            ys[i] += vys[i]

    state.tick_count += 1
    for i in range(n):
        if not (math.isfinite(xs[i]) and math.isfinite(ys[i])):
            raise NumericalError(state.tick_count, state.ids[i])
    return state


def run(
    dataset: GraphDataset,
    config: LayoutConfig,
    layers: LayerAssignment | None = None,
    pins: Mapping[str, tuple[float, float]] | None = None,
    record_trace: bool = False,
) -> Layout:
    """Simulate to convergence. Layered mode ends with a snap pass that
    sets every y exactly to its band center and clamps unpinned x into
    [margin, width - margin]; pinned x is honored verbatim (in layered
    mode a pin's y is owned by the band, so only its x survives)."""
    layered = config.mode is LayoutMode.FORCE_LAYERED
    state = init_positions(dataset, config, layers)
    if pins:
        for pid, (px, py) in pins.items():
            if layered:
                assert layers is not None
                py = config.band_center(layers.layer_of.get(pid, 0))
            pin(state, pid, (px, py))
    index = _SimIndex(dataset, config, layers)
    trace: list[TraceEntry] = []
    if record_trace:
        trace.append(TraceEntry(0, state.alpha, state.positions()))
    while state.alpha >= config.alpha_min and state.tick_count < config.tick_limit:
        tick(state, dataset, config, layers, sim_index=index)
        if record_trace:
            trace.append(TraceEntry(state.tick_count, state.alpha, state.positions()))
    final_alpha = state.alpha
    if layered:
        assert layers is not None and index.band_y is not None
        lo, hi = config.margin, config.canvas_width - config.margin
        for i in range(len(state.x)):
            state.y[i] = index.band_y[i]
            if i not in state.pinned:
                state.x[i] = min(max(state.x[i], lo), hi)
        if record_trace:
            trace.append(TraceEntry(state.tick_count, 0.0, state.positions()))
    return Layout(
        ids=dataset.ids,
        positions=state.positions(),
        mode=config.mode,
        layers=layers,
        ticks_run=state.tick_count,
        final_alpha=final_alpha,
        config=config,
        trace=tuple(trace) if record_trace else None,
    )
