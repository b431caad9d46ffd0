import { describe, expect, it } from "vitest";
import type { EpisodeEndMessage, StateMessage } from "../src/protocol.js";
import { parseServerMessage } from "../src/protocol.js";
import { metricRows, STALE_AFTER_MS, ViewState } from "../src/view.js";

function state(tick: number, pose: [number, number, number] = [1, 2, 0]): StateMessage {
  return { type: "state", tick, pose, bodies: [], metrics: { l0: 0.5, I_nav: 1.0 } };
}

describe("ViewState", () => {
  it("renders only the latest tick and grows the trail", () => {
    const v = new ViewState();
    v.onOpen();
    v.handleMessage(state(3), 0);
    v.handleMessage(state(6, [1.1, 2, 0]), 50);
    expect(v.latest?.tick).toBe(6);
    expect(v.trail).toEqual([
      [1, 2],
      [1.1, 2],
    ]);
  });

  it("a tick reset (new episode) clears the trail", () => {
    const v = new ViewState();
    v.handleMessage(state(300), 0);
    v.handleMessage(state(3), 50);
    expect(v.trail).toEqual([[1, 2]]);
  });

  it("episode_end appends one history row with the scores", () => {
    const v = new ViewState();
    const end: EpisodeEndMessage = {
      type: "episode_end",
      seed: 7,
      metrics: { E_nav: 0.98, I_nav: 1.0 },
      outcome: { success: true },
      log: "teleop_0000_seed7.jsonl",
    };
    v.handleMessage(end, 0);
    expect(v.history).toHaveLength(1);
    expect(v.history[0]).toMatchObject({ seed: 7, outcome: "success" });
    expect(v.history[0].metrics.E_nav).toBe(0.98);
  });

  it("goes stale after 1 s without messages, only while connected", () => {
    const v = new ViewState();
    v.onOpen();
    v.handleMessage(state(1), 1000);
    expect(v.isStale(1000 + STALE_AFTER_MS - 1)).toBe(false);
    expect(v.isStale(1000 + STALE_AFTER_MS + 1)).toBe(true);
    v.onClose();
    expect(v.isStale(1e9)).toBe(false); // disconnected has its own overlay
  });

  it("busy notice sticks through the server closing the socket", () => {
    const v = new ViewState();
    v.onOpen();
    v.handleMessage({ type: "busy", detail: "another operator is connected" }, 0);
    v.onClose();
    expect(v.status).toBe("busy");
    expect(v.busyDetail).toContain("another operator");
  });
});

describe("parseServerMessage", () => {
  it("accepts known types and rejects junk", () => {
    expect(parseServerMessage(JSON.stringify(state(1)))?.type).toBe("state");
    expect(parseServerMessage("not json")).toBeNull();
    expect(parseServerMessage('{"type": "mystery"}')).toBeNull();
    expect(parseServerMessage("42")).toBeNull();
  });
});

describe("metricRows", () => {
  it("labels pre-termination navigation efficiency as projected", () => {
    const rows = metricRows({ E_nav_projected: 0.91, I_nav: 1, l0: 2.5, reward: -0.1 });
    expect(rows.map(([label]) => label)).toEqual([
      "E_nav (projected)",
      "I_nav",
      "reward",
      "path length (m)",
    ]);
    expect(rows[0][1]).toBe("0.9100");
  });

  it("skips absent and non-finite values", () => {
    expect(metricRows({ E_nav_projected: Infinity })).toEqual([]);
  });
});
