/** App behavior against a canned fake service (no network). */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App, type AppElements } from "../src/app.js";
import type { DatasetDoc, LayoutDoc } from "../src/types.js";

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

const EMPTY_DATASET: DatasetDoc = { meta: {}, persons: [], relations: [] };

function cannedApi(routes: Record<string, unknown>): ApiClient {
  return new ApiClient("", async (url: string) => {
    const path = url.split("?")[0];
    if (path in routes) {
      return {
        ok: true,
        status: 200,
        json: async () => routes[path],
      } as unknown as Response;
    }
    return {
      ok: false,
      status: 404,
      json: async () => ({ code: "unknown", message: `no route ${path}` }),
    } as unknown as Response;
  });
}

describe("app edge cases", () => {
  it("renders an empty-dataset message without crashing", async () => {
    const api = cannedApi({ "/api/dataset": EMPTY_DATASET });
    const app = new App(api, makeElements(), { animationMs: 0 });
    await app.loadAndRender();
    expect(document.querySelector(".empty-message")).not.toBeNull();
    expect(app.scene).toBeNull();
  });

  it("shows a visible banner when the service is unreachable", async () => {
    const api = new ApiClient("", async () => {
      throw new Error("refused");
    });
    const app = new App(api, makeElements(), { animationMs: 0 });
    await expect(app.loadAndRender()).rejects.toThrow();
    const banner = document.getElementById("banner")!;
    expect(banner.classList.contains("hidden")).toBe(false);
    expect(banner.textContent).toContain("network");
  });

  it("reverts the pin and shows a banner when re-layout fails", async () => {
    const persons = [{ id: "a", label: "A" }];
    const layout: LayoutDoc = {
      dataset: { meta: {}, persons, relations: [] },
      modes: { force_layered: { positions: [{ id: "a", x: 1, y: 2 }], config: {} } },
    };
    let layoutCalls = 0;
    const api = new ApiClient("", async (url: string, init?: RequestInit) => {
      const path = url.split("?")[0];
      if (path === "/api/dataset") {
        return { ok: true, status: 200, json: async () => layout.dataset } as unknown as Response;
      }
      if (path === "/api/layout") {
        layoutCalls += 1;
        if (init && layoutCalls > 1) throw new Error("connection reset");
        return { ok: true, status: 200, json: async () => layout } as unknown as Response;
      }
      return { ok: false, status: 404, json: async () => ({}) } as unknown as Response;
    });
    const app = new App(api, makeElements(), { animationMs: 0 });
    await app.loadAndRender();
    await app.pinAt("a", 50, 60);
    await app.idle();
    expect(app.state.pins).toEqual({});
    expect(app.state.banner).not.toBeNull();
  });
});
