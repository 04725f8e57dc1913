/** Annotation draft: the in-progress segment list the analyst draws, plus the
 * canonical export that must byte-match the analysis engine's own
 * serialization of the same data. */

export const AXES = ["x", "y", "z_vertical", "free"] as const;
export const ROLES = [
  "structure",
  "reference_height",
  "target_height",
  "straightness_chain",
] as const;

export type Axis = (typeof AXES)[number];
export type Role = (typeof ROLES)[number];

export interface DraftSegment {
  id: string;
  a: [number, number];
  b: [number, number];
  axis: Axis;
  role: Role;
}

export interface AnnotationDraft {
  imageHash: string;
  segments: DraftSegment[];
  referenceHeightCm: number | null;
  notes: string;
}

export function emptyDraft(imageHash: string): AnnotationDraft {
  return { imageHash, segments: [], referenceHeightCm: null, notes: "" };
}

export function nextSegmentId(draft: AnnotationDraft, prefix: string): string {
  let n = 1;
  const taken = new Set(draft.segments.map((s) => s.id));
  while (taken.has(`${prefix}_${n}`)) n += 1;
  return `${prefix}_${n}`;
}

/** Draft-level invariant check; a non-empty list means submission is blocked.
 * Mirrors the server's validation so failures surface before any request. */
export function draftProblems(draft: AnnotationDraft): string[] {
  const problems: string[] = [];
  const seen = new Set<string>();
  for (const seg of draft.segments) {
    if (seen.has(seg.id)) problems.push(`duplicate segment id ${seg.id}`);
    seen.add(seg.id);
    if (seg.a[0] === seg.b[0] && seg.a[1] === seg.b[1]) {
      problems.push(`${seg.id}: endpoints coincide`);
    }
  }
  const refs = draft.segments.filter((s) => s.role === "reference_height");
  if (refs.length > 1) problems.push("more than one reference_height segment");
  if (refs.length === 1 && draft.referenceHeightCm === null) {
    problems.push("reference segment present but reference height missing");
  }
  if (draft.referenceHeightCm !== null && !(draft.referenceHeightCm > 0)) {
    problems.push("reference height must be > 0 cm");
  }
  return problems;
}

/** Preconditions for the measure button; `hint` names the first missing piece
 * (e.g. "MissingReference" when the reference segment was deleted). */
export function measureReadiness(draft: AnnotationDraft): { ready: boolean; hint: string | null; checklist: string[] } {
  const checklist: string[] = [];
  const refs = draft.segments.filter((s) => s.role === "reference_height");
  if (refs.length === 0 || draft.referenceHeightCm === null) {
    checklist.push("MissingReference: add one reference_height segment with its real height");
  }
  if (draft.segments.filter((s) => s.role === "target_height").length === 0) {
    checklist.push("add at least one target_height segment");
  }
  for (const axis of ["x", "y"] as const) {
    if (draft.segments.filter((s) => s.axis === axis).length < 2) {
      checklist.push(`need >= 2 segments on axis ${axis} for its vanishing point`);
    }
  }
  if (draft.segments.filter((s) => s.axis === "z_vertical").length < 2) {
    checklist.push("need >= 2 z_vertical segments for the vertical vanishing point");
  }
  checklist.push(...draftProblems(draft));
  const hint = checklist.length ? checklist[0].split(":")[0] : null;
  return { ready: checklist.length === 0, hint, checklist };
}

// --- canonical export ---------------------------------------------------------

/** Format a float the way the engine's serializer does: shortest round-trip
 * decimal, with a trailing ".0" on integral values. */
export function formatFloat(x: number): string {
  if (Number.isInteger(x) && Math.abs(x) < 1e16) return `${x.toFixed(1)}`;
  return String(x);
}

function escapeJsonString(s: string): string {
  let out = "";
  for (const ch of s) {
    const code = ch.codePointAt(0)!;
    if (ch === '"') out += '\\"';
    else if (ch === "\\") out += "\\\\";
    else if (code === 0x08) out += "\\b";
    else if (code === 0x09) out += "\\t";
    else if (code === 0x0a) out += "\\n";
    else if (code === 0x0c) out += "\\f";
    else if (code === 0x0d) out += "\\r";
    else if (code < 0x20 || code > 0x7e) {
      // non-ASCII escaped as UTF-16 units, matching the engine's serializer
      for (let i = 0; i < ch.length; i++) {
        out += "\\u" + ch.charCodeAt(i).toString(16).padStart(4, "0");
      }
    } else out += ch;
  }
  return out;
}

/** Canonical annotation JSON: sorted keys, two-space indent, engine float
 * formatting. Byte-identical to the engine serializing the same values. */
export function canonicalAnnotationJson(draft: AnnotationDraft): string {
  const lines: string[] = ["{"];
  lines.push(`  "image_hash": "${escapeJsonString(draft.imageHash)}",`);
  lines.push(`  "notes": "${escapeJsonString(draft.notes)}",`);
  const ref = draft.referenceHeightCm === null ? "null" : formatFloat(draft.referenceHeightCm);
  lines.push(`  "reference_height_cm": ${ref},`);
  if (draft.segments.length === 0) {
    lines.push('  "segments": []');
  } else {
    lines.push('  "segments": [');
    draft.segments.forEach((seg, i) => {
      const comma = i < draft.segments.length - 1 ? "," : "";
      lines.push("    {");
      lines.push('      "a": [');
      lines.push(`        ${formatFloat(seg.a[0])},`);
      lines.push(`        ${formatFloat(seg.a[1])}`);
      lines.push("      ],");
      lines.push(`      "axis": "${escapeJsonString(seg.axis)}",`);
      lines.push('      "b": [');
      lines.push(`        ${formatFloat(seg.b[0])},`);
      lines.push(`        ${formatFloat(seg.b[1])}`);
      lines.push("      ],");
      lines.push(`      "id": "${escapeJsonString(seg.id)}",`);
      lines.push(`      "role": "${escapeJsonString(seg.role)}"`);
      lines.push(`    }${comma}`);
    });
    lines.push("  ]");
  }
  lines.push("}");
  return lines.join("\n");
}

/** Parse a stored annotation-set JSON back into a draft (server round trip). */
export function draftFromJson(obj: unknown): AnnotationDraft {
  const record = obj as {
    image_hash?: string;
    segments?: Array<{ id: string; a: number[]; b: number[]; axis?: string; role?: string }>;
    reference_height_cm?: number | null;
    notes?: string;
  };
  return {
    imageHash: record.image_hash ?? "",
    segments: (record.segments ?? []).map((s) => ({
      id: s.id,
      a: [s.a[0], s.a[1]],
      b: [s.b[0], s.b[1]],
      axis: (AXES as readonly string[]).includes(s.axis ?? "") ? (s.axis as Axis) : "free",
      role: (ROLES as readonly string[]).includes(s.role ?? "") ? (s.role as Role) : "structure",
    })),
    referenceHeightCm: record.reference_height_cm ?? null,
    notes: record.notes ?? "",
  };
}
