/** Canvas 2D arena rendering. Reads ViewState; never mutates it. */
import { Camera, worldToScreen } from "./camera.js";
import type { Goal, StateMessage } from "./protocol.js";
import type { ViewState } from "./view.js";

const KIND_STYLE: Record<string, { fill: string; stroke: string }> = {
  wall: { fill: "#3a3f4a", stroke: "#262a33" },
  box: { fill: "#c98f4e", stroke: "#8a5e2e" },
  wheeled_box: { fill: "#5b9bd5", stroke: "#33608a" },
  ice_floe: { fill: "#dbe9f4", stroke: "#9fbcd4" },
  robot: { fill: "#3fb950", stroke: "#1f6f2e" },
};

export function renderFrame(
  ctx: CanvasRenderingContext2D,
  view: ViewState,
  cam: Camera,
  now: number,
): void {
  const { width, height } = ctx.canvas;
  ctx.fillStyle = "#12151c";
  ctx.fillRect(0, 0, width, height);

  const state = view.latest;
  if (state === null) {
    drawCenteredText(ctx, view.status === "connecting" ? "connecting…" : "waiting for simulation");
    return;
  }

  if (state.goal) drawGoal(ctx, cam, state.goal, state.bounds);
  drawTrail(ctx, cam, view.trail);
  for (const body of state.bodies) {
    const style = KIND_STYLE[body.kind] ?? { fill: "#888", stroke: "#555" };
    for (const ring of body.vertices) {
      tracePath(ctx, cam, ring);
      ctx.fillStyle = style.fill;
      ctx.fill();
      ctx.strokeStyle = style.stroke;
      ctx.lineWidth = 1;
      ctx.stroke();
    }
  }
  drawHeading(ctx, cam, state);

  if (view.status !== "connected" || view.isStale(now)) {
    drawOverlay(ctx, overlayText(view));
  }
}

function overlayText(view: ViewState): string {
  if (view.status === "busy") return view.busyDetail ?? "another operator is connected";
  if (view.status === "connected") return "no data — simulation stalled";
  return "disconnected — retrying…";
}

function tracePath(ctx: CanvasRenderingContext2D, cam: Camera, ring: number[][]): void {
  ctx.beginPath();
  ring.forEach(([x, y], i) => {
    const [sx, sy] = worldToScreen(cam, x, y);
    if (i === 0) ctx.moveTo(sx, sy);
    else ctx.lineTo(sx, sy);
  });
  ctx.closePath();
}

function drawTrail(ctx: CanvasRenderingContext2D, cam: Camera, trail: [number, number][]): void {
  if (trail.length < 2) return;
  ctx.beginPath();
  trail.forEach(([x, y], i) => {
    const [sx, sy] = worldToScreen(cam, x, y);
    if (i === 0) ctx.moveTo(sx, sy);
    else ctx.lineTo(sx, sy);
  });
  ctx.strokeStyle = "rgba(63, 185, 80, 0.5)";
  ctx.lineWidth = 2;
  ctx.stroke();
}

function drawHeading(ctx: CanvasRenderingContext2D, cam: Camera, state: StateMessage): void {
  const [x, y, theta] = state.pose;
  const [sx, sy] = worldToScreen(cam, x, y);
  const [hx, hy] = worldToScreen(cam, x + 0.25 * Math.cos(theta), y + 0.25 * Math.sin(theta));
  ctx.beginPath();
  ctx.moveTo(sx, sy);
  ctx.lineTo(hx, hy);
  ctx.strokeStyle = "#eaffea";
  ctx.lineWidth = 2;
  ctx.stroke();
}

function drawGoal(
  ctx: CanvasRenderingContext2D,
  cam: Camera,
  goal: Goal,
  bounds?: [[number, number], [number, number]],
): void {
  ctx.fillStyle = "rgba(80, 200, 120, 0.15)";
  ctx.strokeStyle = "rgba(80, 200, 120, 0.6)";
  ctx.lineWidth = 1.5;
  if (goal.kind === "disc") {
    const [sx, sy] = worldToScreen(cam, goal.center[0], goal.center[1]);
    ctx.beginPath();
    ctx.arc(sx, sy, goal.radius * cam.scale, 0, 2 * Math.PI);
    ctx.fill();
    ctx.stroke();
  } else if (goal.kind === "line") {
    // goal is the half-plane above y_value; shade it up to the arena top
    const xLo = bounds ? bounds[0][0] : -100;
    const xHi = bounds ? bounds[1][0] : 100;
    const yHi = bounds ? bounds[1][1] : goal.y_value + 100;
    const [ax, ay] = worldToScreen(cam, xLo, goal.y_value);
    const [bx] = worldToScreen(cam, xHi, goal.y_value);
    const [, ty] = worldToScreen(cam, xLo, yHi);
    ctx.fillRect(ax, ty, bx - ax, ay - ty);
    ctx.beginPath();
    ctx.moveTo(ax, ay);
    ctx.lineTo(bx, ay);
    ctx.stroke();
  } else {
    const [ax, ay] = worldToScreen(cam, goal.lo[0], goal.lo[1]);
    const [bx, by] = worldToScreen(cam, goal.hi[0], goal.hi[1]);
    if (goal.mode === "interior") {
      ctx.fillRect(ax, by, bx - ax, ay - by);
    }
    // boundary mode (area clearing): outline only — boxes must leave the rect
    ctx.strokeRect(ax, by, bx - ax, ay - by);
  }
}

function drawOverlay(ctx: CanvasRenderingContext2D, text: string): void {
  const { width, height } = ctx.canvas;
  ctx.fillStyle = "rgba(10, 10, 14, 0.55)";
  ctx.fillRect(0, 0, width, height);
  drawCenteredText(ctx, text);
}

function drawCenteredText(ctx: CanvasRenderingContext2D, text: string): void {
  const { width, height } = ctx.canvas;
  ctx.fillStyle = "#e6e8ee";
  ctx.font = "16px system-ui, sans-serif";
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  ctx.fillText(text, width / 2, height / 2);
}
