/** Shared view state: both panes read the same zoom/pan so they stay
 * pixel-aligned for comparison. */

import type { AnalysisKind, ParamSet } from "./params.js";
import { defaultParams } from "./params.js";

export const MIN_ZOOM = 0.1;
export const MAX_ZOOM = 32;

export type Layer = { kind: "original" } | { kind: AnalysisKind; params: ParamSet };

export interface PaneState {
  layer: Layer;
  opacity: number; // analysis layer blended over the original
}

export interface ViewState {
  imageId: string | null;
  imageWidth: number;
  imageHeight: number;
  zoom: number;
  panX: number;
  panY: number;
  left: PaneState;
  right: PaneState;
  divider: number; // fraction of the viewport given to the left pane
}

export function initialViewState(): ViewState {
  return {
    imageId: null,
    imageWidth: 0,
    imageHeight: 0,
    zoom: 1,
    panX: 0,
    panY: 0,
    left: { layer: { kind: "original" }, opacity: 1 },
    right: { layer: { kind: "ela", params: defaultParams("ela") }, opacity: 1 },
    divider: 0.5,
  };
}

export function clampZoom(zoom: number): number {
  return Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, zoom));
}

/** Zoom about a fixed screen point so the pixel under the cursor stays put. */
export function zoomAt(state: ViewState, screenX: number, screenY: number, factor: number): void {
  const before = screenToImage(state, screenX, screenY);
  state.zoom = clampZoom(state.zoom * factor);
  const after = imageToScreen(state, before[0], before[1]);
  state.panX += screenX - after[0];
  state.panY += screenY - after[1];
}

export function pan(state: ViewState, dx: number, dy: number): void {
  state.panX += dx;
  state.panY += dy;
}

export function imageToScreen(state: ViewState, ix: number, iy: number): [number, number] {
  return [ix * state.zoom + state.panX, iy * state.zoom + state.panY];
}

export function screenToImage(state: ViewState, sx: number, sy: number): [number, number] {
  return [(sx - state.panX) / state.zoom, (sy - state.panY) / state.zoom];
}

export function setDivider(state: ViewState, fraction: number): void {
  state.divider = Math.min(0.9, Math.max(0.1, fraction));
}

/** Fit the image into a viewport, centered. */
export function fitToViewport(state: ViewState, viewW: number, viewH: number): void {
  if (state.imageWidth === 0 || state.imageHeight === 0) return;
  const scale = Math.min(viewW / state.imageWidth, viewH / state.imageHeight);
  state.zoom = clampZoom(scale);
  state.panX = (viewW - state.imageWidth * state.zoom) / 2;
  state.panY = (viewH - state.imageHeight * state.zoom) / 2;
}
