/** Keyboard state tracking and its mapping onto wire commands. */
import type { ArrowKey, CmdMessage } from "./protocol.js";

const KEY_MAP: Record<string, ArrowKey> = {
  ArrowUp: "up",
  ArrowDown: "down",
  ArrowLeft: "left",
  ArrowRight: "right",
  KeyW: "up",
  KeyS: "down",
  KeyA: "left",
  KeyD: "right",
};

const ORDER: ArrowKey[] = ["up", "down", "left", "right"];

/** Tracks which logical arrow keys are currently held. */
export class KeyState {
  private held = new Set<ArrowKey>();

  /** Returns true when the event maps to a driving key (caller preventDefaults). */
  keyDown(code: string): boolean {
    const k = KEY_MAP[code];
    if (k === undefined) return false;
    this.held.add(k);
    return true;
  }

  keyUp(code: string): boolean {
    const k = KEY_MAP[code];
    if (k === undefined) return false;
    this.held.delete(k);
    return true;
  }

  /** E.g. on window blur: keyup events are lost, so drop everything. */
  clear(): void {
    this.held.clear();
  }

  /** Held keys in a stable order — the bitmask sent on the wire. */
  keys(): ArrowKey[] {
    return ORDER.filter((k) => this.held.has(k));
  }
}

export function cmdForKeys(keys: ArrowKey[]): CmdMessage {
  return { type: "cmd", cmd: { keys } };
}

/**
 * Local description of what the held keys ask for, per action mode —
 * shown in the HUD. The server applies the same mapping to produce the
 * actual action; the client never computes simulation truth.
 */
export function describeCommand(
  keys: ArrowKey[],
  mode: "angular" | "heading" | "wheels",
): string {
  const k = new Set(keys);
  if (mode === "angular") {
    const omega = (k.has("left") ? 1 : 0) - (k.has("right") ? 1 : 0);
    return omega === 0 ? "straight" : omega > 0 ? "turn left" : "turn right";
  }
  if (mode === "wheels") {
    const fwd = (k.has("up") ? 1 : 0) - (k.has("down") ? 1 : 0);
    const turn = (k.has("left") ? 1 : 0) - (k.has("right") ? 1 : 0);
    if (fwd === 0 && turn === 0) return "stop";
    const parts: string[] = [];
    if (fwd !== 0) parts.push(fwd > 0 ? "forward" : "reverse");
    if (turn !== 0) parts.push(turn > 0 ? "spin left" : "spin right");
    return parts.join(" + ");
  }
  // heading: 8-way compass from the key combination
  const dx = (k.has("right") ? 1 : 0) - (k.has("left") ? 1 : 0);
  const dy = (k.has("up") ? 1 : 0) - (k.has("down") ? 1 : 0);
  if (dx === 0 && dy === 0) return "hold heading";
  const names: Record<string, string> = {
    "1,0": "E",
    "1,1": "NE",
    "0,1": "N",
    "-1,1": "NW",
    "-1,0": "W",
    "-1,-1": "SW",
    "0,-1": "S",
    "1,-1": "SE",
  };
  return `head ${names[`${dx},${dy}`]}`;
}
