/** Client-side overlap scores, used by the metrics panel fallback and tests. */

export function jaccard(gt: Uint8Array, seg: Uint8Array): number {
  let inter = 0;
  let union = 0;
  for (let i = 0; i < gt.length; i++) {
    const g = gt[i] !== 0;
    const s = seg[i] !== 0;
    if (g && s) inter++;
    if (g || s) union++;
  }
  return union === 0 ? 1 : inter / union;
}

export function dice(gt: Uint8Array, seg: Uint8Array): number {
  let inter = 0;
  let sum = 0;
  for (let i = 0; i < gt.length; i++) {
    const g = gt[i] !== 0;
    const s = seg[i] !== 0;
    if (g && s) inter++;
    if (g) sum++;
    if (s) sum++;
  }
  return sum === 0 ? 1 : (2 * inter) / sum;
}
