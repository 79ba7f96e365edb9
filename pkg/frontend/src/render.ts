/** SVG scene construction and mutation.
 *
 * The scene is built once per dataset: one circle per person, one line per
 * relation, stroke style keyed by relation kind (solid ancestry, thick
 * marriage, dashed godparenthood). Year filtering only dims glyphs, it
 * never removes them, so the structure stays readable as context.
 */

import type { Camera } from "./state.js";
import type { DatasetDoc, PersonDoc, XY } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
export const NODE_RADIUS = 6;

export interface Scene {
  svg: SVGSVGElement;
  viewport: SVGGElement;
  nodes: Map<string, SVGCircleElement>;
  edges: { el: SVGLineElement; source: string; target: string }[];
}

export interface SceneHandlers {
  onNodeEnter?: (id: string) => void;
  onNodeLeave?: (id: string) => void;
  onNodeMouseDown?: (id: string, ev: MouseEvent) => void;
  onNodeDoubleClick?: (id: string) => void;
}

export function buildScene(
  container: HTMLElement,
  dataset: DatasetDoc,
  width: number,
  height: number,
  handlers: SceneHandlers = {},
): Scene {
  container.replaceChildren();
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.classList.add("scene");

  const viewport = document.createElementNS(SVG_NS, "g");
  viewport.classList.add("viewport");
  svg.appendChild(viewport);

  const edgeGroup = document.createElementNS(SVG_NS, "g");
  edgeGroup.classList.add("edges");
  viewport.appendChild(edgeGroup);

  const edges: Scene["edges"] = [];
  for (const rel of dataset.relations) {
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("class", `edge kind-${rel.kind}`);
    edgeGroup.appendChild(line);
    edges.push({ el: line, source: rel.source, target: rel.target });
  }

  const nodeGroup = document.createElementNS(SVG_NS, "g");
  nodeGroup.classList.add("nodes");
  viewport.appendChild(nodeGroup);

  const nodes = new Map<string, SVGCircleElement>();
  for (const person of dataset.persons) {
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("class", "node");
    circle.setAttribute("r", String(NODE_RADIUS));
    circle.dataset.id = person.id;
    circle.addEventListener("mouseenter", () => handlers.onNodeEnter?.(person.id));
    circle.addEventListener("mouseleave", () => handlers.onNodeLeave?.(person.id));
    circle.addEventListener("mousedown", (ev) => handlers.onNodeMouseDown?.(person.id, ev as MouseEvent));
    circle.addEventListener("dblclick", () => handlers.onNodeDoubleClick?.(person.id));
    nodeGroup.appendChild(circle);
    nodes.set(person.id, circle);
  }

  container.appendChild(svg);
  return { svg, viewport, nodes, edges };
}

export function applyPositions(scene: Scene, positions: Map<string, XY>): void {
  for (const [id, circle] of scene.nodes) {
    const p = positions.get(id);
    if (!p) continue;
    circle.setAttribute("cx", String(p.x));
    circle.setAttribute("cy", String(p.y));
  }
  for (const { el, source, target } of scene.edges) {
    const a = positions.get(source);
    const b = positions.get(target);
    if (!a || !b) continue;
    el.setAttribute("x1", String(a.x));
    el.setAttribute("y1", String(a.y));
    el.setAttribute("x2", String(b.x));
    el.setAttribute("y2", String(b.y));
  }
}

/** Dim everything outside `included`; null clears the filter. Glyphs are
 * never removed. */
export function applyDimming(scene: Scene, included: Set<string> | null): void {
  for (const [id, circle] of scene.nodes) {
    circle.classList.toggle("dimmed", included !== null && !included.has(id));
  }
  for (const { el, source, target } of scene.edges) {
    const dim = included !== null && (!included.has(source) || !included.has(target));
    el.classList.toggle("dimmed", dim);
  }
}

export function applyCamera(scene: Scene, camera: Camera): void {
  scene.viewport.setAttribute(
    "transform",
    `translate(${camera.x} ${camera.y}) scale(${camera.zoom})`,
  );
}

export function applyPinMarkers(scene: Scene, pinned: Set<string>): void {
  for (const [id, circle] of scene.nodes) {
    circle.classList.toggle("pinned", pinned.has(id));
  }
}

export function applyHoverMarker(scene: Scene, hovered: string | null): void {
  for (const [id, circle] of scene.nodes) {
    circle.classList.toggle("hovered", id === hovered);
  }
}

export interface PersonDetails {
  person: PersonDoc;
  degree: number;
  relations: { kind: string; other: string; outgoing: boolean }[];
  isBridge: boolean;
}

export function collectDetails(dataset: DatasetDoc, id: string, bridges: string[]): PersonDetails {
  const person = dataset.persons.find((p) => p.id === id);
  if (!person) throw new Error(`unknown person ${id}`);
  const relations: PersonDetails["relations"] = [];
  for (const rel of dataset.relations) {
    if (rel.source === id) relations.push({ kind: rel.kind, other: rel.target, outgoing: true });
    else if (rel.target === id) relations.push({ kind: rel.kind, other: rel.source, outgoing: false });
  }
  return { person, degree: relations.length, relations, isBridge: bridges.includes(id) };
}

export function renderDetailPanel(panel: HTMLElement, details: PersonDetails | null): void {
  panel.replaceChildren();
  if (!details) {
    panel.classList.add("hidden");
    return;
  }
  panel.classList.remove("hidden");
  const { person } = details;

  const title = document.createElement("h2");
  title.textContent = person.label;
  panel.appendChild(title);

  if (details.isBridge) {
    const badge = document.createElement("span");
    badge.className = "badge bridge-badge";
    badge.textContent = "bridge node";
    panel.appendChild(badge);
  }

  const years = document.createElement("p");
  years.className = "years";
  const born = person.birth_year ?? "?";
  const died = person.death_year ?? "?";
  years.textContent = `${born} – ${died}`;
  panel.appendChild(years);

  const attrs = person.attributes ?? {};
  for (const key of Object.keys(attrs).sort()) {
    const row = document.createElement("p");
    row.className = "attribute";
    row.textContent = `${key}: ${attrs[key]}`;
    panel.appendChild(row);
  }

  const degree = document.createElement("p");
  degree.className = "degree";
  degree.textContent = `degree ${details.degree}`;
  panel.appendChild(degree);

  const list = document.createElement("ul");
  list.className = "relations";
  for (const rel of details.relations) {
    const item = document.createElement("li");
    item.textContent = rel.outgoing ? `${rel.kind} → ${rel.other}` : `${rel.kind} ← ${rel.other}`;
    list.appendChild(item);
  }
  panel.appendChild(list);
}
