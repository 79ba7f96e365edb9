import { ApiClient } from "./api.js";
import { App, type AppElements } from "./app.js";

function grab<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

const elements: AppElements = {
  scene: grab("scene"),
  detailPanel: grab("detail-panel"),
  banner: grab("banner"),
  modeToggle: grab<HTMLButtonElement>("mode-toggle"),
  yearSlider: grab<HTMLInputElement>("year-slider"),
  yearLabel: grab("year-label"),
  yearClear: grab<HTMLButtonElement>("year-clear"),
  countIndicator: grab("count-indicator"),
  traceButton: grab<HTMLButtonElement>("trace-button"),
  resetCamera: grab<HTMLButtonElement>("reset-camera"),
};

const app = new App(new ApiClient(""), elements);
void app.loadAndRender();

declare global {
  interface Window {
    strataViewer: App;
  }
}
window.strataViewer = app;
