/** Boundary-only overlays: one-pixel contours so the image stays legible.
 *
 * Colour convention matches the figures this tool reproduces: ground
 * truth red, interior seeds white, exterior seeds green, segmentation
 * result cyan.
 */

export type Rgba = [number, number, number, number];

export const OVERLAY_COLORS: Record<string, Rgba> = {
  gt: [255, 0, 0, 255],
  interior: [255, 255, 255, 255],
  exterior: [0, 200, 0, 255],
  result: [0, 255, 255, 255],
};

/** Indices of mask pixels with at least one off-mask or off-grid 4-neighbour. */
export function boundaryIndices(mask: Uint8Array, rows: number, cols: number): number[] {
  const out: number[] = [];
  for (let i = 0; i < rows; i++) {
    for (let j = 0; j < cols; j++) {
      const idx = i * cols + j;
      if (!mask[idx]) continue;
      const edge =
        i === 0 ||
        i === rows - 1 ||
        j === 0 ||
        j === cols - 1 ||
        !mask[idx - cols] ||
        !mask[idx + cols] ||
        !mask[idx - 1] ||
        !mask[idx + 1];
      if (edge) out.push(idx);
    }
  }
  return out;
}

/** Paint a contour into an RGBA buffer (length rows*cols*4), in place. */
export function paintBoundary(rgba: Uint8ClampedArray, indices: number[], color: Rgba): void {
  for (const idx of indices) {
    rgba[idx * 4] = color[0];
    rgba[idx * 4 + 1] = color[1];
    rgba[idx * 4 + 2] = color[2];
    rgba[idx * 4 + 3] = color[3];
  }
}

/** Grayscale image (any maxval) to an opaque RGBA buffer. */
export function grayToRgba(pixels: Uint16Array, maxval: number) {
  const out = new Uint8ClampedArray(pixels.length * 4);
  for (let i = 0; i < pixels.length; i++) {
    const v = Math.round((255 * pixels[i]) / maxval);
    out[i * 4] = v;
    out[i * 4 + 1] = v;
    out[i * 4 + 2] = v;
    out[i * 4 + 3] = 255;
  }
  return out;
}

export function labelsToMask(labels: Int8Array, which: 1 | -1): Uint8Array {
  const out = new Uint8Array(labels.length);
  for (let i = 0; i < labels.length; i++) out[i] = labels[i] === which ? 1 : 0;
  return out;
}
