/** Websocket client with automatic reconnection. */

/** Reconnect delay: 0.5 s, 1 s, 2 s, ... capped at 5 s. */
export function reconnectDelayMs(attempt: number): number {
  return Math.min(500 * 2 ** Math.max(attempt, 0), 5000);
}

export function serverUrl(params: URLSearchParams, pageHost: string): string {
  const host = params.get("host") || pageHost || "localhost";
  const port = params.get("port") || "8765";
  return `ws://${host}:${port}`;
}

export interface SocketCallbacks {
  onOpen: () => void;
  onMessage: (raw: string) => void;
  onClose: () => void;
}

/** Owns one WebSocket at a time; reconnects with backoff until close(). */
export class TeleopSocket {
  private ws: WebSocket | null = null;
  private attempt = 0;
  private stopped = false;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private url: string,
    private cb: SocketCallbacks,
  ) {}

  connect(): void {
    if (this.stopped) return;
    const ws = new WebSocket(this.url);
    this.ws = ws;
    ws.onopen = () => {
      this.attempt = 0;
      this.cb.onOpen();
    };
    ws.onmessage = (ev) => this.cb.onMessage(String(ev.data));
    ws.onclose = () => {
      this.ws = null;
      this.cb.onClose();
      if (!this.stopped) {
        this.timer = setTimeout(() => this.connect(), reconnectDelayMs(this.attempt++));
      }
    };
    ws.onerror = () => ws.close();
  }

  send(message: object): boolean {
    if (this.ws === null || this.ws.readyState !== WebSocket.OPEN) return false;
    this.ws.send(JSON.stringify(message));
    return true;
  }

  close(): void {
    this.stopped = true;
    if (this.timer !== null) clearTimeout(this.timer);
    this.ws?.close();
  }
}
