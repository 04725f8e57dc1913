/** Filter parameter model: slider specs, defaults and client-side validation.
 * Defaults mirror the server's shipped analysis configuration. */

export type AnalysisKind = "ela" | "pca" | "lga" | "noise";

export type ParamValue = number | string | boolean;
export type ParamSet = Record<string, ParamValue>;

export interface SliderSpec {
  name: string;
  label: string;
  min: number;
  max: number;
  step: number;
  default: number;
}

export interface ChoiceSpec {
  name: string;
  label: string;
  options: readonly string[];
  default: string;
}

export interface ToggleSpec {
  name: string;
  label: string;
  default: boolean;
}

export interface PanelSpec {
  kind: AnalysisKind;
  title: string;
  sliders: SliderSpec[];
  choices: ChoiceSpec[];
  toggles: ToggleSpec[];
}

export const PANELS: Record<AnalysisKind, PanelSpec> = {
  ela: {
    kind: "ela",
    title: "Error level analysis",
    sliders: [
      { name: "quality", label: "Quality", min: 1, max: 100, step: 1, default: 75 },
      { name: "scale", label: "Scale", min: 0, max: 100, step: 1, default: 50 },
      { name: "contrast", label: "Contrast", min: 0, max: 100, step: 1, default: 20 },
    ],
    choices: [],
    toggles: [],
  },
  pca: {
    kind: "pca",
    title: "Principal components",
    sliders: [
      { name: "component", label: "Component", min: 1, max: 3, step: 1, default: 1 },
    ],
    choices: [
      { name: "mode", label: "Mode", options: ["projection", "distance"], default: "distance" },
    ],
    toggles: [],
  },
  lga: {
    kind: "lga",
    title: "Luminance gradient",
    sliders: [
      { name: "intensity", label: "Intensity", min: 0, max: 100, step: 1, default: 95 },
    ],
    choices: [
      { name: "channel", label: "Channel", options: ["red", "green", "blue", "luminance"], default: "blue" },
    ],
    toggles: [{ name: "normalized", label: "Normalized", default: true }],
  },
  noise: {
    kind: "noise",
    title: "Noise residual",
    sliders: [
      { name: "radius", label: "Radius", min: 1, max: 16, step: 1, default: 1 },
      { name: "gain", label: "Gain", min: 1, max: 64, step: 1, default: 8 },
    ],
    choices: [],
    toggles: [],
  },
};

export function defaultParams(kind: AnalysisKind): ParamSet {
  const spec = PANELS[kind];
  const params: ParamSet = {};
  for (const s of spec.sliders) params[s.name] = s.default;
  for (const c of spec.choices) params[c.name] = c.default;
  for (const t of spec.toggles) params[t.name] = t.default;
  return params;
}

/** Clamp a slider value into its legal range (the client-side floor/ceiling
 * that keeps invalid values from ever reaching the network). */
export function clampSlider(kind: AnalysisKind, name: string, value: number): number {
  const spec = PANELS[kind].sliders.find((s) => s.name === name);
  if (!spec) return value;
  const snapped = Math.round((value - spec.min) / spec.step) * spec.step + spec.min;
  return Math.min(spec.max, Math.max(spec.min, snapped));
}

export interface FieldError {
  field: string;
  error: string;
}

export function validateParams(kind: AnalysisKind, params: ParamSet): FieldError | null {
  const spec = PANELS[kind];
  for (const s of spec.sliders) {
    const v = params[s.name];
    if (typeof v !== "number" || Number.isNaN(v)) {
      return { field: s.name, error: `${s.label} must be a number` };
    }
    if (v < s.min || v > s.max) {
      return { field: s.name, error: `${s.label} must be in ${s.min}..${s.max}` };
    }
  }
  for (const c of spec.choices) {
    const v = params[c.name];
    if (typeof v !== "string" || !c.options.includes(v)) {
      return { field: c.name, error: `${c.label} must be one of ${c.options.join(", ")}` };
    }
  }
  return null;
}

/** Caption text shown under an analysis pane, e.g. "ela (quality 75, scale 50,
 * contrast 20)". Parameter order follows the panel spec. */
export function paramCaption(kind: AnalysisKind, params: ParamSet): string {
  const spec = PANELS[kind];
  const parts: string[] = [];
  for (const s of spec.sliders) parts.push(`${s.name} ${params[s.name]}`);
  for (const c of spec.choices) parts.push(`${c.name} ${params[c.name]}`);
  for (const t of spec.toggles) parts.push(`${t.name} ${params[t.name]}`);
  return `${kind} (${parts.join(", ")})`;
}
