/** Browser annotation tool: scribble seeds, run both growth methods,
 * inspect overlays and the per-iteration trace, compare side by side. */

import { fetchPhantom, segment, SegmentResponse } from "./api";
import { dice, jaccard } from "./metrics";
import {
  base64ToBytes,
  bytesToBase64,
  decodeLabels,
  decodeMask,
  decodePgm,
  encodePgm,
  Pgm,
} from "./pgm";
import { boundaryIndices, grayToRgba, labelsToMask, OVERLAY_COLORS, paintBoundary } from "./overlay";
import { SeedLabel, Stroke, StrokeSet, rasterizeStrokes, seedCounts, strokesToSeedPgm } from "./seeds";
import { applyResponse, beginRequest, displayedLabels, newPane, PaneState, stepTrace } from "./state";

interface AppState {
  image: Pgm | null;
  gt: Uint8Array | null;
  strokes: StrokeSet;
  activeStroke: Stroke | null;
  panes: [PaneState, PaneState];
}

const state: AppState = {
  image: null,
  gt: null,
  strokes: { rows: 0, cols: 0, strokes: [] },
  activeStroke: null,
  panes: [newPane("bgrowth"), newPane("growcut")],
};

const $ = <T extends HTMLElement>(id: string): T => document.getElementById(id) as T;

function banner(message: string, isError = true): void {
  const el = $("banner");
  el.textContent = message;
  el.className = isError ? "banner error" : "banner info";
  el.style.display = message ? "block" : "none";
}

function setImage(img: Pgm, gt: Uint8Array | null): void {
  state.image = img;
  state.gt = gt;
  state.strokes = { rows: img.rows, cols: img.cols, strokes: [] };
  state.activeStroke = null;
  for (const pane of state.panes) {
    pane.response = null;
    pane.traceCursor = -1;
  }
  for (const idx of [0, 1]) {
    const canvas = $(`canvas${idx}`) as unknown as HTMLCanvasElement;
    canvas.width = img.cols;
    canvas.height = img.rows;
  }
  banner("");
  redrawAll();
}

function overlayToggles() {
  return {
    gt: ($("toggle-gt") as HTMLInputElement).checked,
    interior: ($("toggle-interior") as HTMLInputElement).checked,
    exterior: ($("toggle-exterior") as HTMLInputElement).checked,
    result: ($("toggle-result") as HTMLInputElement).checked,
  };
}

function redrawPane(idx: 0 | 1): void {
  const img = state.image;
  if (!img) return;
  const pane = state.panes[idx];
  const canvas = $(`canvas${idx}`) as unknown as HTMLCanvasElement;
  const ctx = canvas.getContext("2d")!;
  const rgba = grayToRgba(img.pixels, img.maxval);
  const toggles = overlayToggles();

  const seeds = rasterizeStrokes(state.strokes);
  if (toggles.interior || toggles.exterior) {
    for (let i = 0; i < seeds.length; i++) {
      if (seeds[i] === 1 && toggles.interior) {
        rgba[i * 4] = 255;
        rgba[i * 4 + 1] = 255;
        rgba[i * 4 + 2] = 255;
      } else if (seeds[i] === -1 && toggles.exterior) {
        rgba[i * 4] = 40;
        rgba[i * 4 + 1] = 200;
        rgba[i * 4 + 2] = 40;
      }
    }
  }
  if (state.gt && toggles.gt) {
    paintBoundary(rgba, boundaryIndices(state.gt, img.rows, img.cols), OVERLAY_COLORS.gt);
  }
  const shown = displayedLabels(pane);
  if (shown && toggles.result) {
    const labels = decodeLabels(decodePgm(base64ToBytes(shown)));
    const fg = labelsToMask(labels, 1);
    paintBoundary(rgba, boundaryIndices(fg, img.rows, img.cols), OVERLAY_COLORS.result);
  }
  ctx.putImageData(new ImageData(rgba, img.cols, img.rows), 0, 0);

  const slider = $(`slider${idx}`) as HTMLInputElement;
  const info = $(`trace-info${idx}`);
  const trace = pane.response?.trace ?? [];
  slider.disabled = trace.length === 0;
  slider.max = String(Math.max(0, trace.length - 1));
  slider.value = String(Math.max(0, pane.traceCursor));
  const entry = pane.traceCursor >= 0 ? trace[pane.traceCursor] : null;
  info.textContent = entry
    ? `iteration ${entry.iteration}/${pane.response!.iterations_run}`
    : pane.response
      ? `final (${pane.response.iterations_run} iterations)`
      : "";
}

function redrawAll(): void {
  redrawPane(0);
  redrawPane(1);
}

function renderMetrics(idx: 0 | 1, response: SegmentResponse): void {
  const el = $(`metrics${idx}`);
  if (!response.metrics) {
    let text = `${response.iterations_run} iterations, converged=${response.converged}`;
    if (state.gt && state.image) {
      const labels = decodeLabels(decodePgm(base64ToBytes(response.labels)));
      const fg = labelsToMask(labels, 1);
      text += ` | J=${jaccard(state.gt, fg).toFixed(4)} D=${dice(state.gt, fg).toFixed(4)}`;
    }
    el.textContent = text;
    return;
  }
  const m = response.metrics;
  el.innerHTML = [
    `A ${m.accuracy.toFixed(4)}`,
    `J ${m.jaccard.toFixed(4)}`,
    `D ${m.dice.toFixed(4)}`,
    `P ${m.precision.toFixed(4)}`,
    `R ${m.recall.toFixed(4)}`,
    `F ${m.f_measure.toFixed(4)}`,
    `${response.iterations_run} it in ${(response.elapsed_s * 1000).toFixed(1)} ms`,
  ]
    .map((s) => `<span>${s}</span>`)
    .join(" ");
}

async function runPane(idx: 0 | 1): Promise<void> {
  const img = state.image;
  if (!img) {
    banner("load or generate an image first");
    return;
  }
  const seeds = rasterizeStrokes(state.strokes);
  const counts = seedCounts(seeds);
  if (counts.fg === 0 || counts.bg === 0) {
    banner("draw at least one interior (foreground) and one exterior (background) stroke");
    return;
  }
  const pane = state.panes[idx];
  const id = beginRequest(pane);
  const button = $(`run${idx}`) as HTMLButtonElement;
  button.disabled = true;
  try {
    const body = {
      image: bytesToBase64(encodePgm(img)),
      seeds: bytesToBase64(strokesToSeedPgm(state.strokes)),
      method: pane.method,
      max_iters: parseInt(($("max-iters") as HTMLInputElement).value, 10) || 30,
      trace: true,
      gt: state.gt ? bytesToBase64(encodePgm(maskToPgm(state.gt, img.rows, img.cols))) : undefined,
    };
    const response = await segment(body);
    if (applyResponse(pane, id, response)) {
      renderMetrics(idx, response);
      redrawPane(idx);
      banner("");
    }
  } catch (err) {
    // keep the strokes; just surface the server's reason
    banner(err instanceof Error ? err.message : String(err));
  } finally {
    button.disabled = false;
  }
}

function maskToPgm(mask: Uint8Array, rows: number, cols: number): Pgm {
  const pixels = new Uint16Array(mask.length);
  for (let i = 0; i < mask.length; i++) pixels[i] = mask[i] ? 255 : 0;
  return { rows, cols, maxval: 255, pixels };
}

function canvasPoint(canvas: HTMLCanvasElement, ev: PointerEvent): [number, number] {
  const rect = canvas.getBoundingClientRect();
  const j = ((ev.clientX - rect.left) / rect.width) * canvas.width;
  const i = ((ev.clientY - rect.top) / rect.height) * canvas.height;
  return [Math.round(i), Math.round(j)];
}

function bindDrawing(idx: 0 | 1): void {
  const canvas = $(`canvas${idx}`) as unknown as HTMLCanvasElement;
  canvas.addEventListener("pointerdown", (ev) => {
    if (!state.image) return;
    canvas.setPointerCapture(ev.pointerId);
    const label = (document.querySelector('input[name="label"]:checked') as HTMLInputElement).value as SeedLabel;
    const radius = parseFloat(($("brush") as HTMLInputElement).value) || 2;
    state.activeStroke = { label, brushRadius: radius, points: [canvasPoint(canvas, ev)] };
    state.strokes.strokes.push(state.activeStroke);
    redrawAll();
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (!state.activeStroke) return;
    state.activeStroke.points.push(canvasPoint(canvas, ev));
    redrawAll();
  });
  const finish = () => {
    state.activeStroke = null;
  };
  canvas.addEventListener("pointerup", finish);
  canvas.addEventListener("pointercancel", finish);
}

async function loadFile(file: File): Promise<void> {
  const bytes = new Uint8Array(await file.arrayBuffer());
  if (bytes[0] === 0x50 && bytes[1] === 0x35) {
    setImage(decodePgm(bytes), null);
    return;
  }
  // anything else goes through the browser decoder and a grayscale pass
  const bitmap = await createImageBitmap(new Blob([bytes]));
  const off = document.createElement("canvas");
  off.width = bitmap.width;
  off.height = bitmap.height;
  const ctx = off.getContext("2d")!;
  ctx.drawImage(bitmap, 0, 0);
  const data = ctx.getImageData(0, 0, off.width, off.height).data;
  const pixels = new Uint16Array(off.width * off.height);
  for (let i = 0; i < pixels.length; i++) {
    pixels[i] = Math.round(0.299 * data[i * 4] + 0.587 * data[i * 4 + 1] + 0.114 * data[i * 4 + 2]);
  }
  setImage({ rows: off.height, cols: off.width, maxval: 255, pixels }, null);
}

function downloadSeeds(): void {
  if (!state.image) return;
  const bytes = strokesToSeedPgm(state.strokes);
  const copy = new Uint8Array(bytes.length);
  copy.set(bytes);
  const blob = new Blob([copy], { type: "image/x-portable-graymap" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = "seeds.pgm";
  a.click();
  URL.revokeObjectURL(a.href);
}

function wireUp(): void {
  bindDrawing(0);
  bindDrawing(1);
  $("file").addEventListener("change", (ev) => {
    const input = ev.target as HTMLInputElement;
    if (input.files && input.files[0]) {
      loadFile(input.files[0]).catch((err) => banner(String(err)));
    }
  });
  $("fetch-phantom").addEventListener("click", async () => {
    try {
      const seed = parseInt(($("phantom-seed") as HTMLInputElement).value, 10) || 1;
      const payload = await fetchPhantom({ rng_seed: seed, rows: 96, cols: 96 });
      const img = decodePgm(base64ToBytes(payload.image));
      const gt = decodeMask(decodePgm(base64ToBytes(payload.gt)));
      setImage(img, gt);
      banner(`phantom ${payload.id} loaded (with ground truth)`, false);
    } catch (err) {
      banner(err instanceof Error ? err.message : String(err));
    }
  });
  $("clear").addEventListener("click", () => {
    state.strokes.strokes.length = 0;
    redrawAll();
  });
  $("undo").addEventListener("click", () => {
    state.strokes.strokes.pop();
    redrawAll();
  });
  $("download-seeds").addEventListener("click", downloadSeeds);
  $("run0").addEventListener("click", () => void runPane(0));
  $("run1").addEventListener("click", () => void runPane(1));
  $("run-both").addEventListener("click", () => {
    void runPane(0);
    void runPane(1);
  });
  for (const idx of [0, 1] as const) {
    $(`slider${idx}`).addEventListener("input", (ev) => {
      const value = parseInt((ev.target as HTMLInputElement).value, 10);
      state.panes[idx].traceCursor = value;
      redrawPane(idx);
    });
    $(`step-back${idx}`).addEventListener("click", () => {
      stepTrace(state.panes[idx], -1);
      redrawPane(idx);
    });
    $(`step-fwd${idx}`).addEventListener("click", () => {
      stepTrace(state.panes[idx], +1);
      redrawPane(idx);
    });
  }
  for (const id of ["toggle-gt", "toggle-interior", "toggle-exterior", "toggle-result"]) {
    $(id).addEventListener("change", redrawAll);
  }
}

wireUp();
banner("load a PGM/PNG or fetch a phantom to start", false);
