/** Acceptance: the annotate-and-measure workflow on the demo scene, with the
 * CLI's own JSON (checked in as a fixture, regenerated via
 * `printproof metrology demo.png --annotations demo_annotations.json --json`)
 * served through a mocked network. Every displayed number must equal that
 * fixture at the displayed precision, and every value must arrive over the
 * (mock) wire — nothing is computed in the client.
 */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { ApiClient, MetrologyJson } from "../src/api.js";
import {
  canonicalAnnotationJson,
  draftFromJson,
  measureReadiness,
} from "../src/annotations.js";
import { defaultParams } from "../src/params.js";
import { displayedNumbers, formatHeight, formatTilt, formatVanishingPoint } from "../src/overlay.js";

const fixturesDir = join(dirname(fileURLToPath(import.meta.url)), "fixtures");
const annotationText = readFileSync(join(fixturesDir, "demo_annotations.json"), "utf-8");
const metrologyText = readFileSync(join(fixturesDir, "demo_metrology.json"), "utf-8");
const cliResult = JSON.parse(metrologyText) as MetrologyJson;
const DEMO_ID = JSON.parse(annotationText).image_hash as string;
const TRUTH_CM = 183.0;

function demoServer(log: string[]) {
  return async (url: string, init?: RequestInit): Promise<Response> => {
    log.push(`${init?.method ?? "GET"} ${url}`);
    const json = (body: unknown, status = 200) =>
      new Response(JSON.stringify(body), { status });
    if (url === "/api/demo") {
      return json({
        image_id: DEMO_ID,
        annotations: "demo",
        reference_height_cm: 198.0,
        target_truth_cm: { figure: TRUTH_CM },
      });
    }
    if (url === `/api/images/${DEMO_ID}/annotations/demo`) {
      return new Response(annotationText, { status: 200 });
    }
    if (url === `/api/images/${DEMO_ID}/annotations/ui` && init?.method === "PUT") {
      // the server would reject a body that fails its invariants
      const body = JSON.parse(String(init.body));
      if (!Array.isArray(body.segments) || body.segments.length === 0) {
        return json({ error: "empty", problems: ["no segments"] }, 422);
      }
      return json({ stored: "ui", segments: body.segments.length });
    }
    if (url.startsWith(`/api/images/${DEMO_ID}/metrology?annotations=ui`)) {
      return new Response(metrologyText, { status: 200 });
    }
    throw new Error(`unexpected request: ${url}`);
  };
}

describe("examiner workflow on the demo scene", () => {
  it("completes annotate-and-measure with API-only computation", async () => {
    const log: string[] = [];
    const client = new ApiClient(demoServer(log));

    const demo = await client.getDemo();
    expect(demo.image_id).toBe(DEMO_ID);

    const stored = await client.getAnnotations(demo.image_id, demo.annotations);
    const draft = draftFromJson(stored);
    const readiness = measureReadiness(draft);
    expect(readiness.ready).toBe(true);

    await client.putAnnotations(demo.image_id, "ui", canonicalAnnotationJson(draft));
    const result = await client.getMetrology(demo.image_id, "ui", 0);

    const height = result.heights.find((h) => h.target_id === "figure")!;
    expect(formatHeight(height)).toBe("figure: 183.0 cm  [179.7, 186.4]");
    expect(height.interval_cm[0]).toBeLessThanOrEqual(TRUTH_CM);
    expect(height.interval_cm[1]).toBeGreaterThanOrEqual(TRUTH_CM);
    expect(Math.abs(height.height_cm - TRUTH_CM) / TRUTH_CM).toBeLessThan(0.01);

    // every byte shown came over the wire: 4 requests, none skipped
    expect(client.requestCount).toBe(4);
    expect(log).toEqual([
      "GET /api/demo",
      `GET /api/images/${DEMO_ID}/annotations/demo`,
      `PUT /api/images/${DEMO_ID}/annotations/ui`,
      `GET /api/images/${DEMO_ID}/metrology?annotations=ui&seed=0`,
    ]);
  });

  it("round-trips the stored annotations into the exact CLI input", async () => {
    const client = new ApiClient(demoServer([]));
    const stored = await client.getAnnotations(DEMO_ID, "demo");
    const draft = draftFromJson(stored);
    expect(canonicalAnnotationJson(draft)).toBe(annotationText.trimEnd());
  });
});

describe("UI parity with the CLI output", () => {
  it("displays exactly the CLI's numbers at the displayed precision", () => {
    const rows = new Map(displayedNumbers(cliResult));

    const cliHeight = cliResult.heights[0];
    expect(rows.get("height_figure")).toBe(
      `figure: ${cliHeight.height_cm.toFixed(1)} cm  ` +
        `[${cliHeight.interval_cm[0].toFixed(1)}, ${cliHeight.interval_cm[1].toFixed(1)}]`,
    );

    for (const [axis, vp] of Object.entries(cliResult.vanishing_points)) {
      expect(rows.get(`vp_${axis}`)).toBe(formatVanishingPoint(axis, vp));
      if (vp.point) {
        expect(rows.get(`vp_${axis}`)).toContain(vp.point[0].toFixed(1));
        expect(rows.get(`vp_${axis}`)).toContain(vp.point[1].toFixed(1));
      }
    }

    expect(rows.get("tilt")).toBe(formatTilt(cliResult.tilt!));
    expect(rows.get("tilt")).toContain(cliResult.tilt!.lr_ratio.toFixed(3));
  });

  it("initializes the ELA sliders at the CLI defaults 75/50/20", () => {
    expect(defaultParams("ela")).toEqual({ quality: 75, scale: 50, contrast: 20 });
  });
});
