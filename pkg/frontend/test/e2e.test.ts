/** End-to-end: a scripted session against the real layout service on the
 * 38-person fixture. Spawns `strata serve` (the installed Python package)
 * and drives the viewer DOM in happy-dom over actual HTTP.
 */

import { spawn, type ChildProcess } from "node:child_process";
import http from "node:http";
import path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App, type AppElements } from "../src/app.js";
import { replay } from "../src/state.js";
import type { DatasetDoc, Mode } from "../src/types.js";

const PORT = 8791 + (process.pid % 97);
const BASE = `http://127.0.0.1:${PORT}`;
const REPO = path.resolve(__dirname, "..", "..");

function nodeFetch(url: string, init?: RequestInit): Promise<Response> {
  return new Promise((resolve, reject) => {
    const req = http.request(
      url,
      { method: init?.method ?? "GET", headers: (init?.headers as Record<string, string>) ?? {} },
      (res) => {
        const chunks: Buffer[] = [];
        res.on("data", (chunk) => chunks.push(chunk));
        res.on("end", () => {
          const text = Buffer.concat(chunks).toString("utf-8");
          resolve({
            ok: (res.statusCode ?? 0) >= 200 && (res.statusCode ?? 0) < 300,
            status: res.statusCode ?? 0,
            json: async () => JSON.parse(text),
          } as unknown as Response);
        });
      },
    );
    req.on("error", reject);
    if (init?.body) req.write(init.body);
    req.end();
  });
}

async function waitForHealth(timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    try {
      const res = await nodeFetch(`${BASE}/api/health`);
      if (res.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error("layout service did not come up");
}

function makeElements(): AppElements {
  document.body.innerHTML = "";
  const make = <T extends HTMLElement>(tag: string, id: string): T => {
    const el = document.createElement(tag) as T;
    el.id = id;
    document.body.appendChild(el);
    return el;
  };
  return {
    scene: make("div", "scene"),
    detailPanel: make("div", "detail-panel"),
    banner: make("div", "banner"),
    modeToggle: make<HTMLButtonElement>("button", "mode-toggle"),
    yearSlider: make<HTMLInputElement>("input", "year-slider"),
    yearLabel: make("span", "year-label"),
    yearClear: make<HTMLButtonElement>("button", "year-clear"),
    countIndicator: make("span", "count-indicator"),
    traceButton: make<HTMLButtonElement>("button", "trace-button"),
    resetCamera: make<HTMLButtonElement>("button", "reset-camera"),
  };
}

let server: ChildProcess;
let api: ApiClient;
let dataset: DatasetDoc;

beforeAll(async () => {
  server = spawn(
    "python3",
    ["-m", "strata.cli", "serve", "fixtures/cornelia38.json", "--port", String(PORT)],
    { cwd: REPO, stdio: "ignore" },
  );
  await waitForHealth(20_000);
  api = new ApiClient(BASE, nodeFetch);
  dataset = await api.dataset();
}, 30_000);

afterAll(() => {
  server?.kill();
});

async function bootApp(): Promise<App> {
  const app = new App(api, makeElements(), { seed: 11, animationMs: 0, traceFrameMs: 0 });
  await app.loadAndRender();
  await app.idle();
  return app;
}

function domPositions(app: App): Map<string, { x: number; y: number }> {
  const out = new Map<string, { x: number; y: number }>();
  for (const [id, circle] of app.scene!.nodes) {
    out.set(id, { x: Number(circle.getAttribute("cx")), y: Number(circle.getAttribute("cy")) });
  }
  return out;
}

describe("viewer against the live service", () => {
  it("renders one glyph per served person (38)", async () => {
    const app = await bootApp();
    expect(dataset.persons.length).toBe(38);
    expect(app.scene!.nodes.size).toBe(38);
    expect(app.scene!.svg.querySelectorAll("circle").length).toBe(38);
    expect(app.scene!.svg.querySelectorAll("line").length).toBe(dataset.relations.length);
  });

  it("mode toggle ends exactly at the other mode's served positions", async () => {
    const app = await bootApp();
    expect(app.state.activeMode).toBe("force_layered");
    await app.toggleMode();
    await app.idle();
    expect(app.state.activeMode).toBe("force_directed");
    const served = await api.layout({ mode: "force_directed", seed: 11, pins: [] });
    const expected = app.positionsOf(served, "force_directed");
    const shown = domPositions(app);
    for (const [id, want] of expected) {
      expect(shown.get(id)).toEqual(want);
    }
  });

  it("drag-pin round-trip lands the node at the server coordinate", async () => {
    const app = await bootApp();
    // force_directed first: there the server honors both coordinates
    await app.setMode("force_directed");
    await app.idle();

    const id = "adriaen";
    const circle = app.scene!.nodes.get(id)!;
    circle.dispatchEvent(new MouseEvent("mousedown", { bubbles: true, clientX: 0, clientY: 0 }));
    app.scene!.svg.dispatchEvent(new MouseEvent("mousemove", { bubbles: true, clientX: 150, clientY: 220 }));
    app.scene!.svg.dispatchEvent(new MouseEvent("mouseup", { bubbles: true, clientX: 150, clientY: 220 }));
    await app.idle();

    expect(app.state.pins[id]).toEqual({ x: 150, y: 220 });
    const served = await api.layout({
      mode: "force_directed", seed: 11, pins: [{ id, x: 150, y: 220 }],
    });
    const want = app.positionsOf(served, "force_directed").get(id)!;
    expect(want).toEqual({ x: 150, y: 220 }); // server pin contract
    expect(domPositions(app).get(id)).toEqual(want);
    expect(circle.classList.contains("pinned")).toBe(true);
  });

  it("pin in layered mode keeps x, y snaps to the band center", async () => {
    const app = await bootApp();
    await app.pinAt("adriaen", 150, 999);
    await app.idle();
    const served = await api.layout({
      mode: "force_layered", seed: 11, pins: [{ id: "adriaen", x: 150, y: 999 }],
    });
    const want = app.positionsOf(served, "force_layered").get("adriaen")!;
    expect(want.x).toBe(150);
    expect(want.y).not.toBe(999);
    expect(domPositions(app).get("adriaen")).toEqual(want);
  });

  it("double-click removes the pin and the node moves again", async () => {
    const app = await bootApp();
    await app.pinAt("adriaen", 150, 100);
    await app.idle();
    const pinnedAt = domPositions(app).get("adriaen")!;
    app.scene!.nodes.get("adriaen")!.dispatchEvent(new MouseEvent("dblclick", { bubbles: true }));
    await app.idle();
    expect(app.state.pins).toEqual({});
    expect(domPositions(app).get("adriaen")).not.toEqual(pinnedAt);
  });

  it("year scrub dims exactly the persons outside the snapshot", async () => {
    const app = await bootApp();
    await app.scrubYear(1650);
    await app.idle();

    const snapshot = await api.snapshot(1650);
    const included = new Set(snapshot.persons.map((p) => p.id));
    // the snapshot rule, restated from the dataset's dates
    for (const p of dataset.persons) {
      const alive =
        (p.birth_year === undefined || p.birth_year <= 1650) &&
        (p.death_year === undefined || p.death_year >= 1650);
      expect(included.has(p.id)).toBe(alive);
    }
    for (const [id, circle] of app.scene!.nodes) {
      expect(circle.classList.contains("dimmed")).toBe(!included.has(id));
    }
    // glyphs are dimmed, never removed
    expect(app.scene!.svg.querySelectorAll("circle").length).toBe(38);
    expect(app.state.includedIds!.length).toBe(included.size);

    await app.clearYear();
    await app.idle();
    for (const [, circle] of app.scene!.nodes) {
      expect(circle.classList.contains("dimmed")).toBe(false);
    }
  });

  it("hovering shows the detail panel with profession and degree", async () => {
    const app = await bootApp();
    app.scene!.nodes.get("cornelis")!.dispatchEvent(new MouseEvent("mouseenter", { bubbles: true }));
    const panel = document.getElementById("detail-panel")!;
    expect(panel.textContent).toContain("Cornelis Vermeulen");
    expect(panel.textContent).toContain("profession: painter");
    expect(panel.textContent).toContain("degree 5");
    app.scene!.nodes.get("cornelis")!.dispatchEvent(new MouseEvent("mouseleave", { bubbles: true }));
    expect(panel.classList.contains("hidden")).toBe(true);
  });

  it("trace replay ends at the served final positions", async () => {
    const app = await bootApp();
    await app.replayTrace();
    await app.idle();
    const served = await api.layout({ mode: "force_layered", seed: 11, pins: [] });
    const expected = app.positionsOf(served, "force_layered");
    const shown = domPositions(app);
    for (const [id, want] of expected) {
      expect(shown.get(id)).toEqual(want);
    }
    expect(app.state.playingTrace).toBe(false);
  });

  it("session state is reproducible from the action log", async () => {
    const app = await bootApp();
    await app.setMode("force_directed");
    await app.pinAt("adriaen", 150, 220);
    await app.scrubYear(1650);
    app.hoverDetails("cornelis");
    await app.idle();
    expect(replay(app.log)).toEqual(app.state);
  });
});
