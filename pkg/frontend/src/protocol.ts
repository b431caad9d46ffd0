/** Wire protocol spoken by the teleoperation service (JSON text frames). */

export interface BodySnapshot {
  id: number;
  kind: "robot" | "box" | "wheeled_box" | "ice_floe" | "wall";
  /** World-frame vertex rings, one per shape part: [[ [x,y], ... ], ...] */
  vertices: number[][][];
}

export interface GoalDisc {
  kind: "disc";
  center: [number, number];
  radius: number;
}

export interface GoalLine {
  kind: "line";
  y_value: number;
}

export interface GoalRect {
  kind: "rect";
  lo: [number, number];
  hi: [number, number];
  mode: "interior" | "boundary";
  open_sides: string[];
}

export type Goal = GoalDisc | GoalLine | GoalRect;

export interface StateMessage {
  type: "state";
  tick: number;
  /** Robot [x, y, theta]. */
  pose: [number, number, number];
  bodies: BodySnapshot[];
  metrics: Record<string, number>;
  env?: string;
  variant?: string;
  mode?: "angular" | "heading" | "wheels";
  /** Arena extent [[x_lo, y_lo], [x_hi, y_hi]]. */
  bounds?: [[number, number], [number, number]];
  goal?: Goal;
}

export interface EpisodeEndMessage {
  type: "episode_end";
  seed: number;
  metrics: Record<string, number>;
  outcome: Record<string, unknown>;
  log: string;
}

export interface BusyMessage {
  type: "busy";
  detail: string;
}

export type ServerMessage = StateMessage | EpisodeEndMessage | BusyMessage;

export type ArrowKey = "up" | "down" | "left" | "right";

export interface CmdMessage {
  type: "cmd";
  cmd: { keys: ArrowKey[] };
}

export interface ResetMessage {
  type: "reset";
  seed?: number;
  spec?: Record<string, unknown>;
}

export function parseServerMessage(raw: string): ServerMessage | null {
  let msg: unknown;
  try {
    msg = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof msg !== "object" || msg === null) return null;
  const t = (msg as { type?: unknown }).type;
  if (t === "state" || t === "episode_end" || t === "busy") {
    return msg as ServerMessage;
  }
  return null;
}
