/** Overlay geometry and number formatting for metrology results.
 *
 * Everything rendered here is a restatement of API response values; no
 * measurement is ever derived client-side.
 */

import type { HeightJson, MetrologyJson, TiltJson, VanishingPointJson } from "./api.js";

export interface Marker {
  x: number;
  y: number;
  label: string;
}

export interface OverlaySegment {
  a: [number, number];
  b: [number, number];
  label: string;
}

/** Displayed precision: one decimal for centimetres. */
export function formatHeight(h: HeightJson): string {
  const [lo, hi] = h.interval_cm;
  return `${h.target_id}: ${h.height_cm.toFixed(1)} cm  [${lo.toFixed(1)}, ${hi.toFixed(1)}]`;
}

export function formatVanishingPoint(axis: string, vp: VanishingPointJson): string {
  if (vp.point === null) {
    const [dx, dy] = vp.direction;
    return `${axis}: at infinity toward (${dx.toFixed(3)}, ${dy.toFixed(3)})`;
  }
  const [x, y] = vp.point;
  return `${axis}: (${x.toFixed(1)}, ${y.toFixed(1)}) px, residual ${vp.rms_residual.toFixed(2)} px`;
}

export function formatTilt(t: TiltJson): string {
  return `tilt: ${t.verdict} (left/right ${t.lr_ratio.toFixed(3)}, top/bottom ${t.tb_ratio.toFixed(3)})`;
}

/** Finite vanishing points as canvas markers (image coordinates). */
export function vpMarkers(result: MetrologyJson): Marker[] {
  const markers: Marker[] = [];
  for (const [axis, vp] of Object.entries(result.vanishing_points)) {
    if (vp.point !== null) {
      markers.push({ x: vp.point[0], y: vp.point[1], label: `VP ${axis}` });
    }
  }
  return markers;
}

/** Clip the horizon line a*x + b*y + c = 0 to an image-rect viewport; null
 * when it misses the rectangle entirely. */
export function horizonSegment(
  line: number[] | null,
  width: number,
  height: number,
): OverlaySegment | null {
  if (!line || line.length < 3) return null;
  const [a, b, c] = line;
  const points: Array<[number, number]> = [];
  const push = (x: number, y: number) => {
    if (x >= -1e-6 && x <= width + 1e-6 && y >= -1e-6 && y <= height + 1e-6) {
      points.push([x, y]);
    }
  };
  if (Math.abs(b) > 1e-12) {
    push(0, -c / b);
    push(width, -(a * width + c) / b);
  }
  if (Math.abs(a) > 1e-12) {
    push(-c / a, 0);
    push(-(b * height + c) / a, height);
  }
  const unique = points.filter(
    (p, i) => points.findIndex((q) => Math.hypot(q[0] - p[0], q[1] - p[1]) < 1e-6) === i,
  );
  if (unique.length < 2) return null;
  return { a: unique[0], b: unique[1], label: "horizon" };
}

/** Every number the results panel displays, flattened for the parity check:
 * each entry is [label, displayed string]. */
export function displayedNumbers(result: MetrologyJson): Array<[string, string]> {
  const rows: Array<[string, string]> = [];
  for (const [axis, vp] of Object.entries(result.vanishing_points)) {
    rows.push([`vp_${axis}`, formatVanishingPoint(axis, vp)]);
  }
  for (const h of result.heights) {
    rows.push([`height_${h.target_id}`, formatHeight(h)]);
  }
  if (result.tilt) rows.push(["tilt", formatTilt(result.tilt)]);
  if (result.distortion) {
    rows.push([
      "distortion",
      `distortion: ${result.distortion.sign} (max sagitta ${result.distortion.max_sagitta_px.toFixed(2)} px)`,
    ]);
  }
  return rows;
}
