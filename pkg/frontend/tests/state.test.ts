import { describe, expect, it } from "vitest";

import { SegmentResponse } from "../src/api";
import {
  applyResponse,
  beginRequest,
  currentSnapshot,
  displayedLabels,
  newPane,
  stepTrace,
} from "../src/state";

function fakeResponse(iters: number, withTrace = true): SegmentResponse {
  return {
    labels: "FINAL",
    iterations_run: iters,
    converged: true,
    elapsed_s: 0.01,
    trace: withTrace
      ? Array.from({ length: iters }, (_, k) => ({ iteration: k + 1, labels: `SNAP${k + 1}` }))
      : undefined,
  };
}

describe("trace cursor", () => {
  it("lands on the final snapshot after a response", () => {
    const pane = newPane("bgrowth");
    const id = beginRequest(pane);
    expect(applyResponse(pane, id, fakeResponse(5))).toBe(true);
    expect(pane.traceCursor).toBe(4);
    expect(currentSnapshot(pane)?.iteration).toBe(5);
  });

  it("clamps at both ends", () => {
    const pane = newPane("bgrowth");
    applyResponse(pane, beginRequest(pane), fakeResponse(3));
    stepTrace(pane, -10);
    expect(pane.traceCursor).toBe(0);
    stepTrace(pane, -1);
    expect(pane.traceCursor).toBe(0); // stepping before the first clamps
    stepTrace(pane, +99);
    expect(pane.traceCursor).toBe(2); // stepping past the last clamps to final
  });

  it("walks every snapshot without error", () => {
    const pane = newPane("growcut");
    applyResponse(pane, beginRequest(pane), fakeResponse(7));
    stepTrace(pane, -99);
    const seen: number[] = [];
    for (let k = 0; k < 7; k++) {
      seen.push(currentSnapshot(pane)!.iteration);
      stepTrace(pane, +1);
    }
    expect(seen).toEqual([1, 2, 3, 4, 5, 6, 7]);
  });

  it("shows the final labels when no trace is present", () => {
    const pane = newPane("bgrowth");
    applyResponse(pane, beginRequest(pane), fakeResponse(4, false));
    expect(pane.traceCursor).toBe(-1);
    expect(stepTrace(pane, 1)).toBe(-1);
    expect(displayedLabels(pane)).toBe("FINAL");
  });
});

describe("stale responses", () => {
  it("ignores a response from an outdated request", () => {
    const pane = newPane("bgrowth");
    const first = beginRequest(pane);
    const second = beginRequest(pane); // user clicked run again
    expect(applyResponse(pane, first, fakeResponse(2))).toBe(false);
    expect(pane.response).toBeNull();
    expect(applyResponse(pane, second, fakeResponse(3))).toBe(true);
    expect(pane.response?.iterations_run).toBe(3);
  });
});
