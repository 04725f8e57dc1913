import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import {
  canonicalAnnotationJson,
  draftFromJson,
  draftProblems,
  emptyDraft,
  formatFloat,
  measureReadiness,
  nextSegmentId,
} from "../src/annotations.js";

const fixturesDir = join(dirname(fileURLToPath(import.meta.url)), "fixtures");
const demoAnnotationText = readFileSync(join(fixturesDir, "demo_annotations.json"), "utf-8");

describe("draft invariants", () => {
  it("accepts a well-formed draft", () => {
    const draft = draftFromJson(JSON.parse(demoAnnotationText));
    expect(draftProblems(draft)).toEqual([]);
    expect(measureReadiness(draft).ready).toBe(true);
  });

  it("flags coincident endpoints and duplicate ids", () => {
    const draft = emptyDraft("h");
    draft.segments.push({ id: "s", a: [1, 1], b: [1, 1], axis: "x", role: "structure" });
    draft.segments.push({ id: "s", a: [0, 0], b: [2, 2], axis: "x", role: "structure" });
    const problems = draftProblems(draft);
    expect(problems.some((p) => p.includes("coincide"))).toBe(true);
    expect(problems.some((p) => p.includes("duplicate"))).toBe(true);
  });

  it("disables measurement with a MissingReference hint when the reference is deleted", () => {
    const draft = draftFromJson(JSON.parse(demoAnnotationText));
    draft.segments = draft.segments.filter((s) => s.role !== "reference_height");
    const readiness = measureReadiness(draft);
    expect(readiness.ready).toBe(false);
    expect(readiness.hint).toBe("MissingReference");
  });

  it("lists every unmet precondition as a checklist", () => {
    const readiness = measureReadiness(emptyDraft("h"));
    expect(readiness.ready).toBe(false);
    expect(readiness.checklist.length).toBeGreaterThanOrEqual(4);
  });

  it("generates fresh segment ids", () => {
    const draft = emptyDraft("h");
    draft.segments.push({ id: "x_1", a: [0, 0], b: [1, 1], axis: "x", role: "structure" });
    expect(nextSegmentId(draft, "x")).toBe("x_2");
    expect(nextSegmentId(draft, "y")).toBe("y_1");
  });
});

describe("canonical export", () => {
  it("round-trips the demo annotation set byte-for-byte", () => {
    const draft = draftFromJson(JSON.parse(demoAnnotationText));
    expect(canonicalAnnotationJson(draft)).toBe(demoAnnotationText.trimEnd());
  });

  it("formats integral floats with a trailing .0", () => {
    expect(formatFloat(198)).toBe("198.0");
    expect(formatFloat(12.845299575421222)).toBe("12.845299575421222");
    expect(formatFloat(0)).toBe("0.0");
    expect(formatFloat(-3)).toBe("-3.0");
  });

  it("escapes non-ASCII the way the engine does", () => {
    const draft = emptyDraft("h");
    draft.notes = "café";
    expect(canonicalAnnotationJson(draft)).toContain('"notes": "caf\\u00e9"');
  });

  it("keeps the schema keys in sorted order", () => {
    const draft = emptyDraft("hash");
    draft.segments.push({ id: "s", a: [1.5, 2], b: [3, 4.25], axis: "free", role: "structure" });
    const text = canonicalAnnotationJson(draft);
    const parsed = JSON.parse(text);
    expect(Object.keys(parsed)).toEqual([
      "image_hash", "notes", "reference_height_cm", "segments",
    ]);
    expect(Object.keys(parsed.segments[0])).toEqual(["a", "axis", "b", "id", "role"]);
    expect(parsed.segments[0].a).toEqual([1.5, 2]);
  });
});
