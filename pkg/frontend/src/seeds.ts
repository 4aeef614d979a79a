/** Brush strokes and their deterministic rasterization to a seed map.
 *
 * A stroke is an ordered point list with a label and a brush radius.
 * Rasterization stamps a filled circle at every point and along the
 * integer line (Bresenham) between consecutive points, in stroke
 * order, so a later stroke overwrites earlier paint wherever they
 * cross. The same strokes always produce the same bytes; the UI test
 * suite pins a golden digest of one scripted stroke set.
 */

import { encodeLabels, encodePgm } from "./pgm";

export type SeedLabel = "fg" | "bg";

export interface Stroke {
  label: SeedLabel;
  brushRadius: number;
  /** ordered [row, col] points, grid coordinates */
  points: Array<[number, number]>;
}

export interface StrokeSet {
  rows: number;
  cols: number;
  strokes: Stroke[];
}

function stampCircle(
  labels: Int8Array,
  rows: number,
  cols: number,
  ci: number,
  cj: number,
  radius: number,
  value: number,
): void {
  // strict inequality: radius 1 paints exactly the centre pixel
  const bound = Math.ceil(radius);
  const r2 = radius * radius;
  for (let di = -bound; di <= bound; di++) {
    const i = ci + di;
    if (i < 0 || i >= rows) continue;
    for (let dj = -bound; dj <= bound; dj++) {
      const j = cj + dj;
      if (j < 0 || j >= cols) continue;
      if (di * di + dj * dj < r2) labels[i * cols + j] = value;
    }
  }
}

/** integer points of the line from a to b, inclusive (Bresenham) */
export function linePoints(a: [number, number], b: [number, number]): Array<[number, number]> {
  let [i0, j0] = a;
  const [i1, j1] = b;
  const di = Math.abs(i1 - i0);
  const dj = Math.abs(j1 - j0);
  const si = i0 < i1 ? 1 : -1;
  const sj = j0 < j1 ? 1 : -1;
  let err = dj - di;
  const out: Array<[number, number]> = [];
  for (;;) {
    out.push([i0, j0]);
    if (i0 === i1 && j0 === j1) break;
    const e2 = 2 * err;
    if (e2 >= -di) {
      err -= di;
      j0 += sj;
    }
    if (e2 <= dj) {
      err += dj;
      i0 += si;
    }
  }
  return out;
}

export function rasterizeStrokes(set: StrokeSet): Int8Array {
  const labels = new Int8Array(set.rows * set.cols);
  for (const stroke of set.strokes) {
    if (stroke.brushRadius <= 0 || stroke.points.length === 0) continue; // zero-radius strokes are ignored
    const value = stroke.label === "fg" ? 1 : -1;
    let prev: [number, number] | null = null;
    for (const point of stroke.points) {
      const pt: [number, number] = [Math.round(point[0]), Math.round(point[1])];
      if (prev) {
        for (const [i, j] of linePoints(prev, pt)) {
          stampCircle(labels, set.rows, set.cols, i, j, stroke.brushRadius, value);
        }
      } else {
        stampCircle(labels, set.rows, set.cols, pt[0], pt[1], stroke.brushRadius, value);
      }
      prev = pt;
    }
  }
  return labels;
}

/** Strokes straight to seed-encoded PGM bytes (the wire format). */
export function strokesToSeedPgm(set: StrokeSet): Uint8Array {
  return encodePgm(encodeLabels(rasterizeStrokes(set), set.rows, set.cols));
}

export function seedCounts(labels: Int8Array): { fg: number; bg: number } {
  let fg = 0;
  let bg = 0;
  for (const v of labels) {
    if (v === 1) fg++;
    else if (v === -1) bg++;
  }
  return { fg, bg };
}
