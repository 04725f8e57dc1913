/** DOM wiring for the examiner: two synchronized panes, live filter panel,
 * annotation drawing, and the measure workflow. All analysis numbers come
 * from the API (see api.ts); this file only draws them. */

import { ApiClient, ApiError, MetrologyJson } from "./api.js";
import {
  AnnotationDraft,
  Axis,
  AXES,
  canonicalAnnotationJson,
  draftFromJson,
  emptyDraft,
  measureReadiness,
  nextSegmentId,
  Role,
  ROLES,
} from "./annotations.js";
import { debounce } from "./debounce.js";
import {
  AnalysisKind,
  clampSlider,
  defaultParams,
  PANELS,
  paramCaption,
  ParamSet,
  validateParams,
} from "./params.js";
import {
  displayedNumbers,
  horizonSegment,
  vpMarkers,
} from "./overlay.js";
import {
  fitToViewport,
  initialViewState,
  pan,
  screenToImage,
  imageToScreen,
  setDivider,
  ViewState,
  zoomAt,
} from "./viewstate.js";

const ROLE_COLORS: Record<Role, string> = {
  structure: "#3d7dd8",
  reference_height: "#d86a3d",
  target_height: "#2ea35e",
  straightness_chain: "#8b8b8b",
};

const api = new ApiClient();
const state: ViewState = initialViewState();
let draft: AnnotationDraft = emptyDraft("");
let metrology: MetrologyJson | null = null;
let originalImage: HTMLImageElement | null = null;
let analysisImage: HTMLImageElement | null = null;
let drawMode = false;
let pendingStart: [number, number] | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const leftCanvas = el<HTMLCanvasElement>("left-canvas");
const rightCanvas = el<HTMLCanvasElement>("right-canvas");
const statusLine = el<HTMLDivElement>("status");
const caption = el<HTMLDivElement>("caption");
const fieldError = el<HTMLDivElement>("field-error");
const resultsPanel = el<HTMLUListElement>("results");
const checklist = el<HTMLUListElement>("checklist");
const segmentList = el<HTMLUListElement>("segment-list");
const measureButton = el<HTMLButtonElement>("measure");

function setStatus(text: string, isError = false): void {
  statusLine.textContent = text;
  statusLine.className = isError ? "error" : "";
}

// --- image loading -------------------------------------------------------------

async function loadImageElement(url: string): Promise<HTMLImageElement> {
  const img = new Image();
  img.decoding = "async";
  img.src = url;
  await img.decode();
  return img;
}

async function activateImage(imageId: string): Promise<void> {
  state.imageId = imageId;
  originalImage = await loadImageElement(`/api/images/${imageId}/file`);
  state.imageWidth = originalImage.naturalWidth;
  state.imageHeight = originalImage.naturalHeight;
  draft = emptyDraft(imageId);
  metrology = null;
  fitToViewport(state, leftCanvas.clientWidth, leftCanvas.clientHeight);
  await refreshAnalysis();
  renderAll();
  setStatus(`image ${imageId.slice(0, 12)}… (${state.imageWidth}x${state.imageHeight})`);
}

// --- filter panel ----------------------------------------------------------------

function currentKind(): AnalysisKind {
  return (el<HTMLSelectElement>("layer-kind").value as AnalysisKind) ?? "ela";
}

let currentParams: ParamSet = defaultParams("ela");

async function refreshAnalysis(): Promise<void> {
  if (!state.imageId) return;
  const kind = currentKind();
  const invalid = validateParams(kind, currentParams);
  if (invalid) {
    fieldError.textContent = `${invalid.field}: ${invalid.error}`;
    return;
  }
  fieldError.textContent = "";
  try {
    const blob = await api.fetchAnalysis(state.imageId, kind, currentParams);
    const url = URL.createObjectURL(blob);
    const img = await loadImageElement(url);
    if (analysisImage) URL.revokeObjectURL(analysisImage.src);
    analysisImage = img;
    caption.textContent = paramCaption(kind, currentParams);
    state.right.layer = { kind, params: { ...currentParams } };
    renderAll();
  } catch (err) {
    if (err instanceof ApiError && err.field) {
      fieldError.textContent = `${err.field}: ${err.message}`;
    } else {
      setStatus(String(err), true);
    }
  }
}

const debouncedRefresh = debounce(() => void refreshAnalysis(), 250);

function buildFilterPanel(): void {
  const kind = currentKind();
  currentParams = defaultParams(kind);
  const spec = PANELS[kind];
  const host = el<HTMLDivElement>("sliders");
  host.innerHTML = "";
  for (const slider of spec.sliders) {
    const row = document.createElement("label");
    row.className = "slider-row";
    const value = document.createElement("span");
    value.textContent = String(slider.default);
    const input = document.createElement("input");
    input.type = "range";
    input.min = String(slider.min);
    input.max = String(slider.max);
    input.step = String(slider.step);
    input.value = String(slider.default);
    input.dataset.param = slider.name;
    input.addEventListener("input", () => {
      const clamped = clampSlider(kind, slider.name, Number(input.value));
      input.value = String(clamped);
      value.textContent = String(clamped);
      currentParams[slider.name] = clamped;
      debouncedRefresh();
    });
    row.append(`${slider.label} `, input, value);
    host.appendChild(row);
  }
  for (const choice of spec.choices) {
    const row = document.createElement("label");
    row.className = "slider-row";
    const select = document.createElement("select");
    for (const option of choice.options) {
      const node = document.createElement("option");
      node.value = option;
      node.textContent = option;
      select.appendChild(node);
    }
    select.value = choice.default;
    select.addEventListener("change", () => {
      currentParams[choice.name] = select.value;
      debouncedRefresh();
    });
    row.append(`${choice.label} `, select);
    host.appendChild(row);
  }
  for (const toggle of spec.toggles) {
    const row = document.createElement("label");
    row.className = "slider-row";
    const input = document.createElement("input");
    input.type = "checkbox";
    input.checked = toggle.default;
    input.addEventListener("change", () => {
      currentParams[toggle.name] = input.checked;
      debouncedRefresh();
    });
    row.append(input, ` ${toggle.label}`);
    host.appendChild(row);
  }
  void refreshAnalysis();
}

// --- drawing ---------------------------------------------------------------------

function resizeCanvases(): void {
  for (const canvas of [leftCanvas, rightCanvas]) {
    const rect = canvas.getBoundingClientRect();
    if (canvas.width !== rect.width || canvas.height !== rect.height) {
      canvas.width = rect.width;
      canvas.height = rect.height;
    }
  }
}

function drawPane(canvas: HTMLCanvasElement, image: HTMLImageElement | null): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.fillStyle = "#14161a";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  if (!image) return;
  ctx.imageSmoothingEnabled = state.zoom < 4;
  ctx.drawImage(
    image,
    state.panX,
    state.panY,
    state.imageWidth * state.zoom,
    state.imageHeight * state.zoom,
  );
}

function drawOverlays(canvas: HTMLCanvasElement): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.lineWidth = 2;
  ctx.font = "12px sans-serif";
  for (const seg of draft.segments) {
    const a = imageToScreen(state, seg.a[0], seg.a[1]);
    const b = imageToScreen(state, seg.b[0], seg.b[1]);
    ctx.strokeStyle = ROLE_COLORS[seg.role];
    ctx.beginPath();
    ctx.moveTo(a[0], a[1]);
    ctx.lineTo(b[0], b[1]);
    ctx.stroke();
    ctx.fillStyle = ROLE_COLORS[seg.role];
    ctx.fillText(seg.id, b[0] + 4, b[1] - 4);
  }
  if (metrology) {
    const horizon = horizonSegment(metrology.horizon, state.imageWidth, state.imageHeight);
    if (horizon) {
      const a = imageToScreen(state, horizon.a[0], horizon.a[1]);
      const b = imageToScreen(state, horizon.b[0], horizon.b[1]);
      ctx.strokeStyle = "#c9b23a";
      ctx.setLineDash([8, 6]);
      ctx.beginPath();
      ctx.moveTo(a[0], a[1]);
      ctx.lineTo(b[0], b[1]);
      ctx.stroke();
      ctx.setLineDash([]);
      ctx.fillStyle = "#c9b23a";
      ctx.fillText("horizon", a[0] + 6, a[1] - 6);
    }
    for (const marker of vpMarkers(metrology)) {
      const p = imageToScreen(state, marker.x, marker.y);
      ctx.strokeStyle = "#e05555";
      ctx.beginPath();
      ctx.arc(p[0], p[1], 6, 0, Math.PI * 2);
      ctx.stroke();
      ctx.fillStyle = "#e05555";
      ctx.fillText(marker.label, p[0] + 8, p[1] + 4);
    }
  }
  if (pendingStart) {
    const p = imageToScreen(state, pendingStart[0], pendingStart[1]);
    ctx.fillStyle = "#ffffff";
    ctx.beginPath();
    ctx.arc(p[0], p[1], 3, 0, Math.PI * 2);
    ctx.fill();
  }
}

function renderAll(): void {
  resizeCanvases();
  drawPane(leftCanvas, originalImage);
  drawOverlays(leftCanvas);
  drawPane(rightCanvas, analysisImage ?? originalImage);
  renderSegmentList();
  renderMeasureState();
}

// --- annotations UI ---------------------------------------------------------------

function renderSegmentList(): void {
  segmentList.innerHTML = "";
  for (const seg of draft.segments) {
    const row = document.createElement("li");
    const remove = document.createElement("button");
    remove.textContent = "x";
    remove.addEventListener("click", () => {
      draft.segments = draft.segments.filter((s) => s.id !== seg.id);
      metrology = null;
      renderAll();
    });
    row.append(
      `${seg.id} [${seg.axis}/${seg.role}] ` +
        `(${seg.a[0].toFixed(1)}, ${seg.a[1].toFixed(1)}) -> ` +
        `(${seg.b[0].toFixed(1)}, ${seg.b[1].toFixed(1)}) `,
      remove,
    );
    segmentList.appendChild(row);
  }
}

function renderMeasureState(): void {
  const readiness = measureReadiness(draft);
  measureButton.disabled = !readiness.ready || !state.imageId;
  measureButton.title = readiness.hint ?? "";
  checklist.innerHTML = "";
  for (const item of readiness.checklist) {
    const row = document.createElement("li");
    row.textContent = item;
    checklist.appendChild(row);
  }
}

function currentAxis(): Axis {
  return el<HTMLSelectElement>("axis").value as Axis;
}

function currentRole(): Role {
  return el<HTMLSelectElement>("role").value as Role;
}

function addSegment(a: [number, number], b: [number, number]): void {
  const role = currentRole();
  const prefix = role === "structure" ? currentAxis() : role;
  draft.segments.push({
    id: nextSegmentId(draft, prefix),
    a,
    b,
    axis: currentAxis(),
    role,
  });
  const height = Number(el<HTMLInputElement>("reference-height").value);
  draft.referenceHeightCm = Number.isFinite(height) && height > 0 ? height : null;
  metrology = null;
  renderAll();
}

async function measure(): Promise<void> {
  if (!state.imageId) return;
  const height = Number(el<HTMLInputElement>("reference-height").value);
  draft.referenceHeightCm = Number.isFinite(height) && height > 0 ? height : null;
  const readiness = measureReadiness(draft);
  renderMeasureState();
  if (!readiness.ready) return;
  try {
    await api.putAnnotations(state.imageId, "ui", canonicalAnnotationJson(draft));
    metrology = await api.getMetrology(state.imageId, "ui", 0);
    resultsPanel.innerHTML = "";
    for (const [, text] of displayedNumbers(metrology)) {
      const row = document.createElement("li");
      row.textContent = text;
      resultsPanel.appendChild(row);
    }
    for (const note of metrology.notes) {
      const row = document.createElement("li");
      row.textContent = `note: ${note}`;
      row.className = "note";
      resultsPanel.appendChild(row);
    }
    renderAll();
    setStatus("measured via API");
  } catch (err) {
    if (err instanceof ApiError && err.problems) {
      checklist.innerHTML = "";
      for (const problem of err.problems) {
        const row = document.createElement("li");
        row.textContent = problem;
        checklist.appendChild(row);
      }
    } else {
      setStatus(String(err), true);
    }
  }
}

// --- event wiring -------------------------------------------------------------------

function wirePaneNavigation(canvas: HTMLCanvasElement): void {
  canvas.addEventListener("wheel", (event) => {
    event.preventDefault();
    const rect = canvas.getBoundingClientRect();
    zoomAt(state, event.clientX - rect.left, event.clientY - rect.top,
      event.deltaY < 0 ? 1.15 : 1 / 1.15);
    renderAll();
  }, { passive: false });

  let dragging = false;
  let last: [number, number] = [0, 0];
  canvas.addEventListener("pointerdown", (event) => {
    const rect = canvas.getBoundingClientRect();
    const sx = event.clientX - rect.left;
    const sy = event.clientY - rect.top;
    if (drawMode && canvas === leftCanvas) {
      const p = screenToImage(state, sx, sy);
      if (pendingStart === null) {
        pendingStart = p;
      } else {
        addSegment(pendingStart, p);
        pendingStart = null;
      }
      renderAll();
      return;
    }
    dragging = true;
    last = [event.clientX, event.clientY];
    canvas.setPointerCapture(event.pointerId);
  });
  canvas.addEventListener("pointermove", (event) => {
    if (!dragging) return;
    pan(state, event.clientX - last[0], event.clientY - last[1]);
    last = [event.clientX, event.clientY];
    renderAll();
  });
  canvas.addEventListener("pointerup", () => {
    dragging = false;
  });
}

function wireDivider(): void {
  const divider = el<HTMLDivElement>("divider");
  const container = el<HTMLDivElement>("panes");
  let dragging = false;
  divider.addEventListener("pointerdown", (event) => {
    dragging = true;
    divider.setPointerCapture(event.pointerId);
  });
  divider.addEventListener("pointermove", (event) => {
    if (!dragging) return;
    const rect = container.getBoundingClientRect();
    setDivider(state, (event.clientX - rect.left) / rect.width);
    container.style.gridTemplateColumns = `${state.divider}fr 6px ${1 - state.divider}fr`;
    renderAll();
  });
  divider.addEventListener("pointerup", () => {
    dragging = false;
  });
}

async function init(): Promise<void> {
  buildFilterPanel();
  el<HTMLSelectElement>("layer-kind").addEventListener("change", buildFilterPanel);

  const axisSelect = el<HTMLSelectElement>("axis");
  for (const axis of AXES) {
    const node = document.createElement("option");
    node.value = axis;
    node.textContent = axis;
    axisSelect.appendChild(node);
  }
  const roleSelect = el<HTMLSelectElement>("role");
  for (const role of ROLES) {
    const node = document.createElement("option");
    node.value = role;
    node.textContent = role;
    roleSelect.appendChild(node);
  }

  el<HTMLInputElement>("file-input").addEventListener("change", async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      const imageId = await api.uploadImage(file, file.name);
      await activateImage(imageId);
    } catch (err) {
      setStatus(String(err), true);
    }
  });

  el<HTMLButtonElement>("load-demo").addEventListener("click", async () => {
    try {
      const demo = await api.getDemo();
      await activateImage(demo.image_id);
      const stored = await api.getAnnotations(demo.image_id, demo.annotations);
      draft = draftFromJson(stored);
      el<HTMLInputElement>("reference-height").value = String(draft.referenceHeightCm ?? "");
      renderAll();
      setStatus(
        `demo scene loaded (reference ${demo.reference_height_cm} cm); press Measure`,
      );
    } catch (err) {
      setStatus(String(err), true);
    }
  });

  el<HTMLButtonElement>("draw-toggle").addEventListener("click", (event) => {
    drawMode = !drawMode;
    pendingStart = null;
    (event.target as HTMLButtonElement).textContent = drawMode ? "Drawing…" : "Draw";
    leftCanvas.style.cursor = drawMode ? "crosshair" : "grab";
  });

  el<HTMLInputElement>("reference-height").addEventListener("input", () => {
    const height = Number(el<HTMLInputElement>("reference-height").value);
    draft.referenceHeightCm = Number.isFinite(height) && height > 0 ? height : null;
    renderMeasureState();
  });

  measureButton.addEventListener("click", () => void measure());

  el<HTMLButtonElement>("export").addEventListener("click", () => {
    const blob = new Blob([canonicalAnnotationJson(draft)], { type: "application/json" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "annotations.json";
    link.click();
    URL.revokeObjectURL(link.href);
  });

  wirePaneNavigation(leftCanvas);
  wirePaneNavigation(rightCanvas);
  wireDivider();
  window.addEventListener("resize", renderAll);
  renderAll();
  setStatus("upload an image or load the demo scene");
}

void init();
