"""Serialization of layouts: SVG documents, layout JSON, tick traces.

Everything here is a pure function of its inputs and emits deterministic
bytes: coordinates are written at fixed 3-decimal precision (half-even),
keys appear in a documented order, and no timestamps or machine
identifiers ever reach an artifact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence
from xml.sax.saxutils import escape

from .engine import Layout, LayoutMode, config_to_dict
from .errors import TraceMissingError
from .layering import LayerAssignment
from .model import GraphDataset, dataset_from_document, dataset_to_document

from .analysis import QualityReport


@dataclass(frozen=True)
class EdgeStyle:
    stroke: str
    width: float
    dasharray: str | None = None


# Relation kinds must stay tellable apart without color: solid ancestry,
# thick marriage, dashed godparenthood, dotted for anything unregistered.
DEFAULT_EDGE_STYLES: Mapping[str, EdgeStyle] = {
    "parent_of": EdgeStyle(stroke="#4a4a4a", width=1.6),
    "spouse_of": EdgeStyle(stroke="#7a5c9e", width=3.4),
    "godparent_of": EdgeStyle(stroke="#3e7cb1", width=1.4, dasharray="6 4"),
}

FALLBACK_EDGE_STYLE = EdgeStyle(stroke="#999999", width=1.2, dasharray="2 3")

LABELS_ALL = "all"
LABELS_HOVER = "hover_only_metadata"
LABELS_NONE = "none"


@dataclass(frozen=True)
class StyleSpec:
    node_radius: float = 6.0
    font_size: float = 11.0
    label_visibility: str = LABELS_HOVER
    node_fill: str = "#d9822b"
    edge_styles: Mapping[str, EdgeStyle] = field(default_factory=lambda: dict(DEFAULT_EDGE_STYLES))

    def __post_init__(self) -> None:
        if self.node_radius <= 0:
            raise ValueError("node_radius must be > 0")
        if self.label_visibility not in (LABELS_ALL, LABELS_HOVER, LABELS_NONE):
            raise ValueError(f"unknown label_visibility {self.label_visibility!r}")

    def edge_style(self, kind: str) -> EdgeStyle:
        return self.edge_styles.get(kind, FALLBACK_EDGE_STYLE)


def _fmt(value: float) -> str:
    """Fixed 3-decimal text, half-even at the third decimal."""
    return f"{round(value, 3):.3f}"


def _person_title(dataset: GraphDataset, pid: str) -> str:
    p = dataset.person(pid)
    years = ""
    if p.birth_year is not None or p.death_year is not None:
        born = str(p.birth_year) if p.birth_year is not None else "?"
        died = str(p.death_year) if p.death_year is not None else "?"
        years = f" ({born}-{died})"
    extras = "".join(f", {k}: {v}" for k, v in sorted(p.attributes.items()))
    return f"{p.label}{years}{extras}"


def to_svg(layout: Layout, dataset: GraphDataset, style: StyleSpec | None = None) -> str:
    """Render a layout as an SVG 1.1 document: one circle per person and
    one straight line per relation, both in canonical order."""
    style = style or StyleSpec()
    config = layout.config
    width = config.canvas_width
    height = config.canvas_height(layout.layers.layer_count if layout.layers else None)
    index_of = dataset.index_of
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<g class="edges">',
    ]
    for rel in dataset.relations:
        x1, y1 = layout.positions[index_of[rel.source]]
        x2, y2 = layout.positions[index_of[rel.target]]
        es = style.edge_style(rel.kind)
        dash = f' stroke-dasharray="{es.dasharray}"' if es.dasharray else ""
        lines.append(
            f'<line class="edge kind-{escape(rel.kind)}" x1="{_fmt(x1)}" y1="{_fmt(y1)}" '
            f'x2="{_fmt(x2)}" y2="{_fmt(y2)}" stroke="{es.stroke}" '
            f'stroke-width="{es.width}"{dash}/>'
        )
    lines.append("</g>")
    lines.append('<g class="nodes">')
    for pid, (x, y) in zip(layout.ids, layout.positions):
        if style.label_visibility == LABELS_HOVER:
            lines.append(
                f'<circle class="node" id="node-{escape(pid)}" cx="{_fmt(x)}" cy="{_fmt(y)}" '
                f'r="{style.node_radius}" fill="{style.node_fill}">'
                f"<title>{escape(_person_title(dataset, pid))}</title></circle>"
            )
        else:
            lines.append(
                f'<circle class="node" id="node-{escape(pid)}" cx="{_fmt(x)}" cy="{_fmt(y)}" '
                f'r="{style.node_radius}" fill="{style.node_fill}"/>'
            )
    lines.append("</g>")
    if style.label_visibility == LABELS_ALL:
        lines.append('<g class="labels">')
        for pid, (x, y) in zip(layout.ids, layout.positions):
            label = escape(dataset.person(pid).label)
            lines.append(
                f'<text x="{_fmt(x + style.node_radius + 2)}" y="{_fmt(y + 3)}" '
                f'font-size="{style.font_size}">{label}</text>'
            )
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


# --- layout JSON ---------------------------------------------------------------


def _positions_list(layout: Layout) -> list[dict[str, Any]]:
    return [
        {"id": pid, "x": round(x, 3), "y": round(y, 3)}
        for pid, (x, y) in zip(layout.ids, layout.positions)
    ]


def _layers_obj(layers: LayerAssignment) -> dict[str, Any]:
    return {
        "layer_of": dict(layers.layer_of.items()),
        "layer_count": layers.layer_count,
    }


def layout_document(
    layouts: Layout | Sequence[Layout],
    dataset: GraphDataset,
    reports: Mapping[str, QualityReport] | None = None,
) -> dict[str, Any]:
    """JSON-ready document for one or two layouts over the same dataset."""
    if isinstance(layouts, Layout):
        layouts = [layouts]
    modes: dict[str, Any] = {}
    for layout in layouts:
        if layout.ids != dataset.ids:
            raise ValueError("layout does not cover this dataset")
        entry: dict[str, Any] = {"positions": _positions_list(layout)}
        if layout.layers is not None:
            entry["layers"] = _layers_obj(layout.layers)
        entry["config"] = config_to_dict(layout.config)
        if reports and layout.mode.value in reports:
            entry["report"] = reports[layout.mode.value].to_dict()
        modes[layout.mode.value] = entry
    return {"dataset": dataset_to_document(dataset), "modes": modes}


def export_layout_json(
    layouts: Layout | Sequence[Layout],
    dataset: GraphDataset,
    reports: Mapping[str, QualityReport] | None = None,
) -> str:
    return json.dumps(layout_document(layouts, dataset, reports), indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class ImportedLayout:
    mode: str
    positions: tuple[tuple[str, float, float], ...]
    layers: LayerAssignment | None
    config: dict
    report: dict | None


@dataclass(frozen=True)
class ImportedDocument:
    dataset: GraphDataset
    modes: dict[str, ImportedLayout]
    raw: dict

    def to_json(self) -> str:
        return json.dumps(self.raw, indent=2, ensure_ascii=False) + "\n"


def import_layout_json(text: str) -> ImportedDocument:
    doc = json.loads(text)
    dataset = dataset_from_document(doc["dataset"])
    modes: dict[str, ImportedLayout] = {}
    for mode, entry in doc["modes"].items():
        layers = None
        if "layers" in entry:
            layers = LayerAssignment(
                layer_of=dict(entry["layers"]["layer_of"]),
                layer_count=entry["layers"]["layer_count"],
            )
        modes[mode] = ImportedLayout(
            mode=mode,
            positions=tuple((p["id"], p["x"], p["y"]) for p in entry["positions"]),
            layers=layers,
            config=entry["config"],
            report=entry.get("report"),
        )
    return ImportedDocument(dataset=dataset, modes=modes, raw=doc)


# --- trace ---------------------------------------------------------------------


def export_trace(layout: Layout) -> str:
    """Tick-by-tick convergence record for the viewer. Alpha decreases
    strictly across entries; a layered run ends with the post-snap frame."""
    if layout.trace is None:
        raise TraceMissingError("layout was produced without record_trace")
    ticks = []
    for entry in layout.trace:
        ticks.append(
            {
                "tick": entry.tick,
                "alpha": entry.alpha,
                "positions": [
                    {"id": pid, "x": round(x, 3), "y": round(y, 3)}
                    for pid, (x, y) in zip(layout.ids, entry.positions)
                ],
            }
        )
    return json.dumps({"ticks": ticks}, indent=2, ensure_ascii=False) + "\n"
