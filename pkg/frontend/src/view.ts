/** Client-side view state: the latest server snapshot plus derived bits.
 *
 * All simulation truth originates from `state` messages; this module only
 * stores and summarizes them for rendering.
 */
import type { EpisodeEndMessage, ServerMessage, StateMessage } from "./protocol.js";

export const STALE_AFTER_MS = 1000;

export type ConnectionStatus = "connecting" | "connected" | "busy" | "disconnected";

export interface HistoryEntry {
  seed: number;
  outcome: string;
  metrics: Record<string, number>;
  log: string;
}

const MAX_TRAIL = 4000;

export class ViewState {
  status: ConnectionStatus = "connecting";
  latest: StateMessage | null = null;
  lastMessageAt = -Infinity;
  /** Robot positions over the current episode, for the trail overlay. */
  trail: [number, number][] = [];
  history: HistoryEntry[] = [];
  busyDetail: string | null = null;

  handleMessage(msg: ServerMessage, now: number): void {
    this.lastMessageAt = now;
    switch (msg.type) {
      case "state": {
        // a tick reset means a new episode started: drop the old trail
        if (this.latest !== null && msg.tick < this.latest.tick) {
          this.trail = [];
        }
        this.latest = msg;
        this.trail.push([msg.pose[0], msg.pose[1]]);
        if (this.trail.length > MAX_TRAIL) this.trail.shift();
        break;
      }
      case "episode_end": {
        this.history.push(summarizeEpisode(msg));
        this.trail = [];
        break;
      }
      case "busy": {
        this.status = "busy";
        this.busyDetail = msg.detail;
        break;
      }
    }
  }

  onOpen(): void {
    this.status = "connected";
    this.busyDetail = null;
  }

  onClose(): void {
    if (this.status !== "busy") this.status = "disconnected";
  }

  /** True when connected but no message has arrived for STALE_AFTER_MS. */
  isStale(now: number): boolean {
    return this.status === "connected" && now - this.lastMessageAt > STALE_AFTER_MS;
  }
}

export function summarizeEpisode(msg: EpisodeEndMessage): HistoryEntry {
  const oc = msg.outcome as { success?: boolean; object_success?: unknown };
  let outcome: string;
  if (typeof oc?.success === "boolean") {
    outcome = oc.success ? "success" : "incomplete";
  } else {
    outcome = "done";
  }
  return { seed: msg.seed, outcome, metrics: msg.metrics, log: msg.log };
}

/** Ordered (label, value) rows for the metrics sidebar. Pre-termination
 * navigation efficiency is labelled "projected" — it only becomes the real
 * score if the episode succeeds. */
export function metricRows(metrics: Record<string, number>): [string, string][] {
  const order: [string, string][] = [
    ["E_nav_projected", "E_nav (projected)"],
    ["E_nav", "E_nav"],
    ["I_nav", "I_nav"],
    ["S_manip", "S_manip"],
    ["E_manip", "E_manip"],
    ["I_manip", "I_manip"],
    ["reward", "reward"],
    ["l0", "path length (m)"],
  ];
  const rows: [string, string][] = [];
  for (const [key, label] of order) {
    const v = metrics[key];
    if (v !== undefined && Number.isFinite(v)) {
      rows.push([label, v.toFixed(4)]);
    }
  }
  return rows;
}
