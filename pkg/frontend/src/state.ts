/** View state and its reducer.
 *
 * Every state transition goes through `reduce`, a pure deterministic
 * function, so any session can be reproduced exactly from its action log.
 * Geometry is never computed here: positions always arrive from the
 * service inside a layout document.
 */

import type { LayoutDoc, Mode, XY } from "./types.js";

export interface Camera {
  x: number;
  y: number;
  zoom: number;
}

export interface ViewState {
  activeMode: Mode;
  hovered: string | null;
  pins: Record<string, XY>;
  yearFilter: number | null;
  /** ids included by the active year snapshot; null when unfiltered */
  includedIds: string[] | null;
  camera: Camera;
  lastLayout: LayoutDoc | null;
  playingTrace: boolean;
  bridges: string[];
  banner: string | null;
}

export type Action =
  | { type: "layout_received"; layout: LayoutDoc }
  | { type: "mode_set"; mode: Mode }
  | { type: "hover_set"; id: string | null }
  | { type: "pin_set"; id: string; x: number; y: number }
  | { type: "pin_removed"; id: string }
  | { type: "pins_replaced"; pins: Record<string, XY> }
  | { type: "year_set"; year: number; includedIds: string[] }
  | { type: "year_cleared" }
  | { type: "camera_panned"; dx: number; dy: number }
  | { type: "camera_zoomed"; factor: number; cx: number; cy: number }
  | { type: "trace_playing_set"; playing: boolean }
  | { type: "bridges_received"; ids: string[] }
  | { type: "banner_set"; message: string | null };

const MIN_ZOOM = 0.1;
const MAX_ZOOM = 10;

export function initialState(mode: Mode = "force_layered"): ViewState {
  return {
    activeMode: mode,
    hovered: null,
    pins: {},
    yearFilter: null,
    includedIds: null,
    camera: { x: 0, y: 0, zoom: 1 },
    lastLayout: null,
    playingTrace: false,
    bridges: [],
    banner: null,
  };
}

function layoutHasNode(layout: LayoutDoc | null, id: string): boolean {
  if (!layout) return false;
  return layout.dataset.persons.some((p) => p.id === id);
}

export function reduce(state: ViewState, action: Action): ViewState {
  switch (action.type) {
    case "layout_received": {
      // pins must keep referencing nodes of the current layout
      const pins: Record<string, XY> = {};
      for (const [id, xy] of Object.entries(state.pins)) {
        if (layoutHasNode(action.layout, id)) pins[id] = xy;
      }
      return { ...state, lastLayout: action.layout, pins, banner: null };
    }
    case "mode_set":
      return { ...state, activeMode: action.mode };
    case "hover_set":
      return { ...state, hovered: action.id };
    case "pin_set": {
      if (!layoutHasNode(state.lastLayout, action.id)) return state;
      return {
        ...state,
        pins: { ...state.pins, [action.id]: { x: action.x, y: action.y } },
      };
    }
    case "pin_removed": {
      if (!(action.id in state.pins)) return state;
      const pins = { ...state.pins };
      delete pins[action.id];
      return { ...state, pins };
    }
    case "pins_replaced":
      return { ...state, pins: { ...action.pins } };
    case "year_set":
      return { ...state, yearFilter: action.year, includedIds: [...action.includedIds] };
    case "year_cleared":
      return { ...state, yearFilter: null, includedIds: null };
    case "camera_panned": {
      const { camera } = state;
      return { ...state, camera: { ...camera, x: camera.x + action.dx, y: camera.y + action.dy } };
    }
    case "camera_zoomed": {
      const { camera } = state;
      const zoom = Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, camera.zoom * action.factor));
      const applied = zoom / camera.zoom;
      // keep the canvas point under (cx, cy) fixed while zooming
      return {
        ...state,
        camera: {
          x: action.cx - (action.cx - camera.x) * applied,
          y: action.cy - (action.cy - camera.y) * applied,
          zoom,
        },
      };
    }
    case "trace_playing_set":
      return { ...state, playingTrace: action.playing };
    case "bridges_received":
      return { ...state, bridges: [...action.ids] };
    case "banner_set":
      return { ...state, banner: action.message };
  }
}

export function replay(log: Action[], mode: Mode = "force_layered"): ViewState {
  return log.reduce(reduce, initialState(mode));
}
