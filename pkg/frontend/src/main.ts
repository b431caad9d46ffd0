/** Entry point: wires network, input, and rendering together. */
import { fitCamera, panCamera, zoomCamera, Camera } from "./camera.js";
import { cmdForKeys, describeCommand, KeyState } from "./input.js";
import { serverUrl, TeleopSocket } from "./net.js";
import { parseServerMessage } from "./protocol.js";
import { metricRows, ViewState } from "./view.js";
import { renderFrame } from "./render.js";

const CMD_PERIOD_MS = 50; // 20 Hz command stream while keys are held

const canvas = document.getElementById("arena") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const statusEl = document.getElementById("status")!;
const metricsEl = document.getElementById("metrics")!;
const commandEl = document.getElementById("command")!;
const historyEl = document.getElementById("history")!;
const envSelect = document.getElementById("env") as HTMLSelectElement;
const variantSelect = document.getElementById("variant") as HTMLSelectElement;
const seedInput = document.getElementById("seed") as HTMLInputElement;
const resetBtn = document.getElementById("reset") as HTMLButtonElement;

const view = new ViewState();
const keys = new KeyState();
let camera: Camera | null = null;
let lastKeys = "";

const socket = new TeleopSocket(serverUrl(new URLSearchParams(location.search), location.hostname), {
  onOpen: () => view.onOpen(),
  onMessage: (raw) => {
    const msg = parseServerMessage(raw);
    if (msg !== null) view.handleMessage(msg, performance.now());
    if (msg?.type === "episode_end") renderHistory();
  },
  onClose: () => view.onClose(),
});
socket.connect();

// ------------------------------------------------------------------ input

window.addEventListener("keydown", (ev) => {
  if (ev.repeat) return;
  if (keys.keyDown(ev.code)) {
    ev.preventDefault();
    sendCmd(); // immediately, not at the next 50 ms boundary
  }
});
window.addEventListener("keyup", (ev) => {
  if (keys.keyUp(ev.code)) {
    ev.preventDefault();
    sendCmd();
  }
});
window.addEventListener("blur", () => {
  keys.clear();
  sendCmd();
});

function sendCmd(): void {
  const held = keys.keys();
  socket.send(cmdForKeys(held));
  lastKeys = held.join("+");
}

// keep streaming the held state at 20 Hz so the server's latest-command
// slot survives reconnects and dropped frames
setInterval(() => {
  if (view.status === "connected") sendCmd();
}, CMD_PERIOD_MS);

resetBtn.addEventListener("click", () => {
  const spec: Record<string, unknown> = { env: envSelect.value };
  if (envSelect.value === "maze") spec.variant = variantSelect.value;
  const seed = parseInt(seedInput.value, 10);
  socket.send({ type: "reset", spec, seed: Number.isFinite(seed) ? seed : undefined });
  canvas.focus();
});

envSelect.addEventListener("change", () => {
  variantSelect.disabled = envSelect.value !== "maze";
});

// --------------------------------------------------------------- camera

canvas.addEventListener("wheel", (ev) => {
  if (camera === null) return;
  ev.preventDefault();
  const rect = canvas.getBoundingClientRect();
  camera = zoomCamera(camera, ev.deltaY < 0 ? 1.15 : 1 / 1.15, ev.clientX - rect.left, ev.clientY - rect.top);
});

let dragging = false;
let dragLast: [number, number] = [0, 0];
canvas.addEventListener("pointerdown", (ev) => {
  dragging = true;
  dragLast = [ev.clientX, ev.clientY];
  canvas.setPointerCapture(ev.pointerId);
});
canvas.addEventListener("pointermove", (ev) => {
  if (!dragging || camera === null) return;
  camera = panCamera(camera, ev.clientX - dragLast[0], ev.clientY - dragLast[1]);
  dragLast = [ev.clientX, ev.clientY];
});
canvas.addEventListener("pointerup", () => (dragging = false));
canvas.addEventListener("dblclick", () => (camera = null)); // re-fit

// -------------------------------------------------------------- render

function frame(): void {
  const now = performance.now();
  const state = view.latest;
  if (state?.bounds && camera === null) {
    camera = fitCamera(state.bounds[0], state.bounds[1], canvas.width, canvas.height);
  }
  const cam = camera ?? fitCamera([0, 0], [6, 6], canvas.width, canvas.height);
  renderFrame(ctx, view, cam, now);
  renderSidebar();
  requestAnimationFrame(frame);
}

function renderSidebar(): void {
  const state = view.latest;
  statusEl.textContent =
    view.status === "connected"
      ? `connected — ${state?.env ?? "?"}${state?.variant && state.env === "maze" ? ` (${state.variant})` : ""}, tick ${state?.tick ?? 0}`
      : view.status;
  statusEl.className = view.status;

  if (state) {
    const rows = metricRows(state.metrics)
      .map(([label, value]) => `<tr><td>${label}</td><td>${value}</td></tr>`)
      .join("");
    metricsEl.innerHTML = `<table>${rows}</table>`;
    const mode = state.mode ?? "angular";
    commandEl.textContent = `${mode}: ${describeCommand(keys.keys(), mode)}${lastKeys ? ` [${lastKeys}]` : ""}`;
  }
}

function renderHistory(): void {
  const rows = view.history
    .slice()
    .reverse()
    .map((h) => {
      const m = h.metrics;
      const cells = ["E_nav", "I_nav", "S_manip", "E_manip", "I_manip"]
        .map((k) => (m[k] !== undefined && m[k] !== null ? Number(m[k]).toFixed(3) : "—"))
        .join("</td><td>");
      return `<tr><td>${h.seed}</td><td>${h.outcome}</td><td>${cells}</td></tr>`;
    })
    .join("");
  historyEl.innerHTML = `<table><tr><th>seed</th><th>outcome</th><th>E_nav</th><th>I_nav</th><th>S</th><th>E_m</th><th>I_m</th></tr>${rows}</table>`;
}

requestAnimationFrame(frame);
