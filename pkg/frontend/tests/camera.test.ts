import { describe, expect, it } from "vitest";
import { fitCamera, panCamera, worldToScreen, zoomCamera } from "../src/camera.js";

describe("fitCamera / worldToScreen", () => {
  it("centres the world rect and flips y", () => {
    const cam = fitCamera([0, 0], [6, 6], 640, 640, 20);
    const [cx, cy] = worldToScreen(cam, 3, 3); // world centre -> canvas centre
    expect(cx).toBeCloseTo(320);
    expect(cy).toBeCloseTo(320);
    const [, topY] = worldToScreen(cam, 3, 6); // larger world y is higher on screen
    expect(topY).toBeLessThan(cy);
  });

  it("preserves aspect ratio on a wide canvas", () => {
    const cam = fitCamera([0, 0], [2, 6], 1000, 600, 0);
    expect(cam.scale).toBeCloseTo(100); // limited by height: 600 / 6
    const [lx] = worldToScreen(cam, 0, 3);
    const [rx] = worldToScreen(cam, 2, 3);
    expect(rx - lx).toBeCloseTo(200);
  });
});

describe("panCamera", () => {
  it("shifts every screen point by the pixel delta", () => {
    const cam = fitCamera([0, 0], [6, 6], 640, 640);
    const before = worldToScreen(cam, 1, 2);
    const after = worldToScreen(panCamera(cam, 15, -7), 1, 2);
    expect(after[0] - before[0]).toBeCloseTo(15);
    expect(after[1] - before[1]).toBeCloseTo(-7);
  });
});

describe("zoomCamera", () => {
  it("keeps the anchor point fixed", () => {
    const cam = fitCamera([0, 0], [6, 6], 640, 640);
    const anchorWorld: [number, number] = [2, 4];
    const [px, py] = worldToScreen(cam, ...anchorWorld);
    const zoomed = zoomCamera(cam, 2.0, px, py);
    const [qx, qy] = worldToScreen(zoomed, ...anchorWorld);
    expect(qx).toBeCloseTo(px);
    expect(qy).toBeCloseTo(py);
    expect(zoomed.scale).toBeCloseTo(cam.scale * 2);
  });

  it("clamps the scale range", () => {
    const cam = { scale: 2, offsetX: 0, offsetY: 0 };
    expect(zoomCamera(cam, 1e-9, 0, 0).scale).toBe(1);
    expect(zoomCamera(cam, 1e9, 0, 0).scale).toBe(10000);
  });
});
