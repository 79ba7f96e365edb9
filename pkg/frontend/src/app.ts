/** Application shell: wires the service, the reducer, and the scene.
 *
 * The viewer never computes layout. Every position on screen came from a
 * layout document served by the backend; animations merely interpolate
 * between two served geometries. Interactions dispatch actions through
 * the reducer and the full action log is kept, so a session's final state
 * is reproducible by replaying the log.
 */

import { ApiClient, ApiError, modeEntry } from "./api.js";
import {
  applyCamera,
  applyDimming,
  applyHoverMarker,
  applyPinMarkers,
  applyPositions,
  buildScene,
  collectDetails,
  renderDetailPanel,
  type Scene,
} from "./render.js";
import { initialState, reduce, type Action, type ViewState } from "./state.js";
import type { DatasetDoc, LayoutDoc, Mode, PinDoc, TraceDoc, XY } from "./types.js";

export interface AppElements {
  scene: HTMLElement;
  detailPanel: HTMLElement;
  banner: HTMLElement;
  modeToggle: HTMLButtonElement;
  yearSlider: HTMLInputElement;
  yearLabel: HTMLElement;
  yearClear: HTMLButtonElement;
  countIndicator: HTMLElement;
  traceButton: HTMLButtonElement;
  resetCamera: HTMLButtonElement;
}

export interface AppOptions {
  seed?: number;
  initialMode?: Mode;
  /** milliseconds for the mode-toggle / re-layout animation; 0 snaps */
  animationMs?: number;
  /** milliseconds per trace frame during replay */
  traceFrameMs?: number;
}

interface YearRange {
  min: number;
  max: number;
}

export class App {
  readonly api: ApiClient;
  readonly log: Action[] = [];
  state: ViewState;
  dataset: DatasetDoc | null = null;
  scene: Scene | null = null;

  private readonly el: AppElements;
  private readonly seed: number;
  private readonly animationMs: number;
  private readonly traceFrameMs: number;
  private shown = new Map<string, XY>();
  private requestToken = 0;
  private dragging: { id: string; moved: boolean } | null = null;
  private panning: { lastX: number; lastY: number } | null = null;
  private yearRange: YearRange | null = null;
  private pending: Promise<void> = Promise.resolve();

  constructor(api: ApiClient, elements: AppElements, options: AppOptions = {}) {
    this.api = api;
    this.el = elements;
    this.seed = options.seed ?? 11;
    this.animationMs = options.animationMs ?? 600;
    this.traceFrameMs = options.traceFrameMs ?? 16;
    this.state = initialState(options.initialMode ?? "force_layered");
    this.bindControls();
  }

  /** Resolves when every queued interaction has settled. */
  async idle(): Promise<void> {
    let last;
    do {
      last = this.pending;
      await last;
    } while (last !== this.pending);
  }

  dispatch(action: Action): void {
    this.log.push(action);
    this.state = reduce(this.state, action);
    this.sync();
  }

  private enqueue(work: () => Promise<void>): Promise<void> {
    this.pending = this.pending.then(work, work);
    return this.pending;
  }

  // --- boot -----------------------------------------------------------------

  async loadAndRender(): Promise<void> {
    try {
      const dataset = await this.api.dataset();
      this.dataset = dataset;
      if (dataset.persons.length === 0) {
        this.el.scene.replaceChildren();
        const empty = document.createElement("p");
        empty.className = "empty-message";
        empty.textContent = "The served dataset has no persons.";
        this.el.scene.appendChild(empty);
        return;
      }
      this.computeYearRange(dataset);
      const layout = await this.api.layout(this.layoutRequest(this.state.activeMode));
      this.buildSceneFor(dataset, layout);
      this.dispatch({ type: "layout_received", layout });
      this.shown = this.positionsOf(layout, this.state.activeMode);
      this.paintPositions();
      void this.fetchBridges();
    } catch (err) {
      this.showBanner(err);
      throw err;
    }
  }

  private async fetchBridges(): Promise<void> {
    try {
      const report = await this.api.report(this.seed);
      this.dispatch({ type: "bridges_received", ids: report.force_layered.bridge_nodes });
    } catch {
      // the badge is decoration; a failed report must not break the scene
    }
  }

  private computeYearRange(dataset: DatasetDoc): void {
    const years: number[] = [];
    for (const p of dataset.persons) {
      if (p.birth_year !== undefined) years.push(p.birth_year);
      if (p.death_year !== undefined) years.push(p.death_year);
    }
    if (years.length === 0) {
      this.el.yearSlider.disabled = true;
      return;
    }
    this.yearRange = { min: Math.min(...years), max: Math.max(...years) };
    this.el.yearSlider.min = String(this.yearRange.min);
    this.el.yearSlider.max = String(this.yearRange.max);
    this.el.yearSlider.value = String(this.yearRange.min);
    this.el.yearLabel.textContent = `${this.yearRange.min}–${this.yearRange.max}`;
  }

  private buildSceneFor(dataset: DatasetDoc, layout: LayoutDoc): void {
    const entry = modeEntry(layout, this.state.activeMode);
    const config = entry.config as { canvas_width?: number; band_height?: number; margin?: number };
    const width = config.canvas_width ?? 1200;
    const layers = entry.layers;
    const height =
      layers && config.band_height && config.margin
        ? 2 * config.margin + Math.max(layers.layer_count, 1) * config.band_height
        : width;
    this.scene = buildScene(this.el.scene, dataset, width, height, {
      onNodeEnter: (id) => this.hoverDetails(id),
      onNodeLeave: () => this.hoverDetails(null),
      onNodeMouseDown: (id, ev) => this.beginDrag(id, ev),
      onNodeDoubleClick: (id) => void this.removePin(id),
    });
    this.bindSceneEvents();
  }

  // --- layout requests --------------------------------------------------------

  private layoutRequest(mode: Mode, trace = false): { mode: Mode; seed: number; pins: PinDoc[]; trace?: boolean } {
    const pins: PinDoc[] = Object.entries(this.state.pins).map(([id, xy]) => ({
      id,
      x: xy.x,
      y: xy.y,
    }));
    return trace ? { mode, seed: this.seed, pins, trace } : { mode, seed: this.seed, pins };
  }

  /** POST the current pins for `mode`; stale responses are dropped. */
  private async requestLayout(mode: Mode, onFailure?: () => void): Promise<void> {
    const token = ++this.requestToken;
    try {
      const layout = await this.api.layout(this.layoutRequest(mode));
      if (token !== this.requestToken) return; // a newer request superseded this one
      this.dispatch({ type: "layout_received", layout });
      await this.animateTo(this.positionsOf(layout, mode));
    } catch (err) {
      if (token !== this.requestToken) return;
      onFailure?.();
      this.showBanner(err);
    }
  }

  positionsOf(layout: LayoutDoc, mode: Mode): Map<string, XY> {
    const entry = modeEntry(layout, mode);
    return new Map(entry.positions.map((p) => [p.id, { x: p.x, y: p.y }]));
  }

  // --- animation ----------------------------------------------------------------

  private async animateTo(target: Map<string, XY>): Promise<void> {
    if (!this.scene) return;
    const duration = this.animationMs;
    if (duration <= 0 || this.shown.size === 0) {
      this.shown = target;
      this.paintPositions();
      return;
    }
    const from = this.shown;
    const start = Date.now();
    await new Promise<void>((resolve) => {
      const step = () => {
        const t = Math.min(1, (Date.now() - start) / duration);
        const blend = new Map<string, XY>();
        for (const [id, to] of target) {
          const a = from.get(id) ?? to;
          blend.set(id, { x: a.x + (to.x - a.x) * t, y: a.y + (to.y - a.y) * t });
        }
        this.shown = blend;
        this.paintPositions();
        if (t >= 1) resolve();
        else setTimeout(step, 16);
      };
      step();
    });
    this.shown = target;
    this.paintPositions();
  }

  // --- interactions ----------------------------------------------------------------

  setMode(mode: Mode): Promise<void> {
    return this.enqueue(async () => {
      if (mode === this.state.activeMode) return;
      this.dispatch({ type: "mode_set", mode });
      this.el.modeToggle.textContent = modeLabel(mode);
      await this.requestLayout(mode);
    });
  }

  toggleMode(): Promise<void> {
    const next: Mode =
      this.state.activeMode === "force_layered" ? "force_directed" : "force_layered";
    return this.setMode(next);
  }

  /** Pin a node at canvas coordinates and ask the service to re-layout. */
  pinAt(id: string, x: number, y: number): Promise<void> {
    return this.enqueue(async () => {
      const before = { ...this.state.pins };
      this.dispatch({ type: "pin_set", id, x, y });
      this.paintPins();
      await this.requestLayout(this.state.activeMode, () =>
        this.dispatch({ type: "pins_replaced", pins: before }),
      );
      this.paintPins();
    });
  }

  removePin(id: string): Promise<void> {
    return this.enqueue(async () => {
      if (!(id in this.state.pins)) return;
      this.dispatch({ type: "pin_removed", id });
      this.paintPins();
      await this.requestLayout(this.state.activeMode);
    });
  }

  hoverDetails(id: string | null): void {
    this.dispatch({ type: "hover_set", id });
  }

  /** Fetch the snapshot for a year and dim everyone outside it. */
  scrubYear(year: number): Promise<void> {
    return this.enqueue(async () => {
      try {
        const snapshot = await this.api.snapshot(year);
        this.dispatch({
          type: "year_set",
          year,
          includedIds: snapshot.persons.map((p) => p.id),
        });
      } catch (err) {
        this.showBanner(err);
      }
    });
  }

  clearYear(): Promise<void> {
    return this.enqueue(async () => {
      this.dispatch({ type: "year_cleared" });
    });
  }

  /** Re-run the active mode with trace recording and replay the ticks. */
  replayTrace(): Promise<void> {
    return this.enqueue(async () => {
      if (this.state.playingTrace) return;
      this.dispatch({ type: "trace_playing_set", playing: true });
      try {
        const layout = await this.api.layout({
          ...this.layoutRequest(this.state.activeMode),
          trace: true,
        });
        this.dispatch({ type: "layout_received", layout });
        const trace = layout.trace;
        if (trace) await this.playTrace(trace);
        this.shown = this.positionsOf(layout, this.state.activeMode);
        this.paintPositions();
      } catch (err) {
        this.showBanner(err);
      } finally {
        this.dispatch({ type: "trace_playing_set", playing: false });
      }
    });
  }

  private async playTrace(trace: TraceDoc): Promise<void> {
    for (const tick of trace.ticks) {
      this.shown = new Map(tick.positions.map((p) => [p.id, { x: p.x, y: p.y }]));
      this.paintPositions();
      if (this.traceFrameMs > 0) {
        await new Promise((resolve) => setTimeout(resolve, this.traceFrameMs));
      }
    }
  }

  // --- pointer handling -------------------------------------------------------------

  clientToCanvas(clientX: number, clientY: number): XY {
    const rect = this.scene?.svg.getBoundingClientRect();
    const px = clientX - (rect?.left ?? 0);
    const py = clientY - (rect?.top ?? 0);
    const { camera } = this.state;
    return { x: (px - camera.x) / camera.zoom, y: (py - camera.y) / camera.zoom };
  }

  private beginDrag(id: string, ev: MouseEvent): void {
    ev.preventDefault?.();
    this.dragging = { id, moved: false };
  }

  private bindSceneEvents(): void {
    const svg = this.scene!.svg;
    svg.addEventListener("mousedown", (ev) => {
      if (this.dragging) return; // a node already claimed this press
      this.panning = { lastX: (ev as MouseEvent).clientX, lastY: (ev as MouseEvent).clientY };
    });
    svg.addEventListener("mousemove", (ev) => {
      const mouse = ev as MouseEvent;
      if (this.dragging && this.scene) {
        this.dragging.moved = true;
        const p = this.clientToCanvas(mouse.clientX, mouse.clientY);
        // live feedback while dragging; the server round-trip happens on release
        this.shown.set(this.dragging.id, p);
        this.paintPositions();
      } else if (this.panning) {
        const dx = mouse.clientX - this.panning.lastX;
        const dy = mouse.clientY - this.panning.lastY;
        this.panning = { lastX: mouse.clientX, lastY: mouse.clientY };
        this.dispatch({ type: "camera_panned", dx, dy });
      }
    });
    svg.addEventListener("mouseup", (ev) => {
      const mouse = ev as MouseEvent;
      if (this.dragging) {
        const { id, moved } = this.dragging;
        this.dragging = null;
        if (moved) {
          const p = this.clientToCanvas(mouse.clientX, mouse.clientY);
          void this.pinAt(id, p.x, p.y);
        }
      }
      this.panning = null;
    });
    svg.addEventListener("wheel", (ev) => {
      const wheel = ev as WheelEvent;
      wheel.preventDefault?.();
      const factor = wheel.deltaY < 0 ? 1.15 : 1 / 1.15;
      const rect = svg.getBoundingClientRect();
      this.dispatch({
        type: "camera_zoomed",
        factor,
        cx: wheel.clientX - (rect?.left ?? 0),
        cy: wheel.clientY - (rect?.top ?? 0),
      });
    });
  }

  private bindControls(): void {
    this.el.modeToggle.addEventListener("click", () => void this.toggleMode());
    this.el.modeToggle.textContent = modeLabel(this.state.activeMode);
    this.el.yearSlider.addEventListener("input", () => {
      void this.scrubYear(Number(this.el.yearSlider.value));
    });
    this.el.yearClear.addEventListener("click", () => void this.clearYear());
    this.el.traceButton.addEventListener("click", () => void this.replayTrace());
    this.el.resetCamera.addEventListener("click", () => {
      const { camera } = this.state;
      this.dispatch({ type: "camera_zoomed", factor: 1 / camera.zoom, cx: 0, cy: 0 });
      this.dispatch({ type: "camera_panned", dx: -this.state.camera.x, dy: -this.state.camera.y });
    });
  }

  // --- painting -----------------------------------------------------------------------

  private paintPositions(): void {
    if (this.scene) applyPositions(this.scene, this.shown);
  }

  private paintPins(): void {
    if (this.scene) applyPinMarkers(this.scene, new Set(Object.keys(this.state.pins)));
  }

  private showBanner(err: unknown): void {
    const message =
      err instanceof ApiError ? `${err.code}: ${err.message}` : `error: ${String(err)}`;
    this.dispatch({ type: "banner_set", message });
  }

  /** Repaint everything the reducer owns. */
  private sync(): void {
    const { state } = this;
    this.el.banner.textContent = state.banner ?? "";
    this.el.banner.classList.toggle("hidden", state.banner === null);

    if (this.scene) {
      applyCamera(this.scene, state.camera);
      applyDimming(this.scene, state.includedIds === null ? null : new Set(state.includedIds));
      applyHoverMarker(this.scene, state.hovered);
    }
    if (this.dataset) {
      const total = this.dataset.persons.length;
      const included = state.includedIds === null ? total : state.includedIds.length;
      this.el.countIndicator.textContent =
        state.yearFilter === null
          ? `${total} persons`
          : `${included}/${total} alive in ${state.yearFilter}`;
      renderDetailPanel(
        this.el.detailPanel,
        state.hovered === null ? null : collectDetails(this.dataset, state.hovered, state.bridges),
      );
    }
    this.el.traceButton.disabled = state.playingTrace;
  }
}

function modeLabel(mode: Mode): string {
  return mode === "force_layered" ? "layered" : "directed";
}
