/** World <-> screen transform: world is y-up metres, canvas is y-down pixels. */

export interface Camera {
  /** Pixels per metre. */
  scale: number;
  /** Screen position of the world origin, in pixels. */
  offsetX: number;
  offsetY: number;
}

/** Fit the world bounds into a canvas with a pixel margin, preserving aspect. */
export function fitCamera(
  lo: [number, number],
  hi: [number, number],
  width: number,
  height: number,
  margin = 20,
): Camera {
  const spanX = Math.max(hi[0] - lo[0], 1e-9);
  const spanY = Math.max(hi[1] - lo[1], 1e-9);
  const scale = Math.min((width - 2 * margin) / spanX, (height - 2 * margin) / spanY);
  // centre the world rect in the canvas
  const cx = (lo[0] + hi[0]) / 2;
  const cy = (lo[1] + hi[1]) / 2;
  return {
    scale,
    offsetX: width / 2 - cx * scale,
    offsetY: height / 2 + cy * scale,
  };
}

export function worldToScreen(cam: Camera, x: number, y: number): [number, number] {
  return [cam.offsetX + x * cam.scale, cam.offsetY - y * cam.scale];
}

export function panCamera(cam: Camera, dxPixels: number, dyPixels: number): Camera {
  return { ...cam, offsetX: cam.offsetX + dxPixels, offsetY: cam.offsetY + dyPixels };
}

/** Zoom by `factor` keeping the screen point (px, py) fixed. */
export function zoomCamera(cam: Camera, factor: number, px: number, py: number): Camera {
  const scale = Math.min(Math.max(cam.scale * factor, 1), 10000);
  const f = scale / cam.scale;
  return {
    scale,
    offsetX: px - (px - cam.offsetX) * f,
    offsetY: py - (py - cam.offsetY) * f,
  };
}
