/** View state for one method pane: last response, trace cursor, overlay toggles.
 *
 * The trace cursor always stays within the snapshot list; stepping past
 * either end clamps. Stale-response protection: every run gets a fresh
 * request id and a response only lands if its id is still current.
 */

import { SegmentResponse, TraceEntry } from "./api";

export interface OverlayToggles {
  gt: boolean;
  interior: boolean;
  exterior: boolean;
  result: boolean;
}

export interface PaneState {
  method: string;
  response: SegmentResponse | null;
  traceCursor: number; // index into response.trace, or -1 when no trace
  requestId: number;
  inFlightId: number | null;
}

export function newPane(method: string): PaneState {
  return { method, response: null, traceCursor: -1, requestId: 0, inFlightId: null };
}

export function beginRequest(pane: PaneState): number {
  pane.requestId += 1;
  pane.inFlightId = pane.requestId;
  return pane.requestId;
}

/** Returns true if the response was accepted (i.e. not stale). */
export function applyResponse(pane: PaneState, id: number, response: SegmentResponse): boolean {
  if (id !== pane.inFlightId) return false;
  pane.inFlightId = null;
  pane.response = response;
  pane.traceCursor = response.trace && response.trace.length > 0 ? response.trace.length - 1 : -1;
  return true;
}

export function traceLength(pane: PaneState): number {
  return pane.response?.trace?.length ?? 0;
}

/** Move the trace cursor by delta snapshots, clamping at both ends. */
export function stepTrace(pane: PaneState, delta: number): number {
  const n = traceLength(pane);
  if (n === 0) {
    pane.traceCursor = -1;
    return -1;
  }
  const base = pane.traceCursor < 0 ? n - 1 : pane.traceCursor;
  pane.traceCursor = Math.min(n - 1, Math.max(0, base + delta));
  return pane.traceCursor;
}

export function currentSnapshot(pane: PaneState): TraceEntry | null {
  const n = traceLength(pane);
  if (n === 0 || pane.traceCursor < 0) return null;
  return pane.response!.trace![pane.traceCursor];
}

/** Labels to show: the selected snapshot while scrubbing, else the final result. */
export function displayedLabels(pane: PaneState): string | null {
  const snap = currentSnapshot(pane);
  if (snap) return snap.labels;
  return pane.response?.labels ?? null;
}
