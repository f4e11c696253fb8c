/** Teleop protocol client.
 *
 * Works over any websocket with browser-style `on*` properties, so the
 * same code drives the cockpit in a browser and scripted sessions in
 * Node (via the `ws` package).
 */

import type { ErrorFrame, HelloFrame, InputFrame, Snapshot } from "./protocol.js";
import { PROTOCOL_VERSION, clampStick, decodeServerFrame, encodeInput } from "./protocol.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  onopen: ((...args: any[]) => void) | null;
  onmessage: ((ev: any) => void) | null;
  onclose: ((...args: any[]) => void) | null;
  onerror: ((...args: any[]) => void) | null;
}

interface Waiter {
  pred: (s: Snapshot) => boolean;
  resolve: (s: Snapshot) => void;
  reject: (e: Error) => void;
  timer: ReturnType<typeof setTimeout>;
}

function frameText(data: unknown): string {
  return typeof data === "string" ? data : String(data);
}

export class CockpitClient {
  hello: HelloFrame | null = null;
  latest: Snapshot | null = null;
  closed = false;

  onSnapshot: ((s: Snapshot) => void) | null = null;
  onServerError: ((e: ErrorFrame) => void) | null = null;
  onClose: (() => void) | null = null;

  private waiters: Waiter[] = [];

  constructor(private sock: SocketLike) {}

  /** Send the hello handshake; resolves with the server hello. */
  start(timeoutMs = 10_000): Promise<HelloFrame> {
    return new Promise<HelloFrame>((resolve, reject) => {
      const timer = setTimeout(() => reject(new Error("handshake timed out")), timeoutMs);
      this.sock.onopen = () => this.sock.send(encodeInput({ kind: "hello", v: PROTOCOL_VERSION }));
      this.sock.onmessage = (ev: any) => {
        let frame;
        try {
          frame = decodeServerFrame(frameText(ev.data));
        } catch {
          return; // tolerate frames from future servers
        }
        if (frame.kind === "hello") {
          this.hello = frame;
          clearTimeout(timer);
          resolve(frame);
        } else if (frame.kind === "snapshot") {
          this.latest = frame;
          this.onSnapshot?.(frame);
          this.settleWaiters(frame);
        } else {
          if (!this.hello) {
            clearTimeout(timer);
            reject(new Error(frame.error));
          }
          this.onServerError?.(frame);
        }
      };
      this.sock.onclose = () => {
        this.closed = true;
        clearTimeout(timer);
        reject(new Error("connection closed"));
        const err = new Error("connection closed");
        for (const w of this.waiters.splice(0)) {
          clearTimeout(w.timer);
          w.reject(err);
        }
        this.onClose?.();
      };
      this.sock.onerror = () => {
        /* the close handler settles everything */
      };
    });
  }

  private settleWaiters(snap: Snapshot): void {
    this.waiters = this.waiters.filter((w) => {
      if (!w.pred(snap)) return true;
      clearTimeout(w.timer);
      w.resolve(snap);
      return false;
    });
  }

  /** Resolve on the next snapshot satisfying `pred` (future frames only). */
  waitFor(pred: (s: Snapshot) => boolean, timeoutMs = 15_000): Promise<Snapshot> {
    return new Promise<Snapshot>((resolve, reject) => {
      if (this.closed) {
        reject(new Error("connection closed"));
        return;
      }
      const waiter: Waiter = {
        pred,
        resolve,
        reject,
        timer: setTimeout(() => {
          this.waiters = this.waiters.filter((w) => w !== waiter);
          reject(new Error(`timed out waiting for snapshot (${timeoutMs} ms)`));
        }, timeoutMs),
      };
      this.waiters.push(waiter);
    });
  }

  /** The next snapshot, whatever it is. */
  nextSnapshot(timeoutMs = 15_000): Promise<Snapshot> {
    return this.waitFor(() => true, timeoutMs);
  }

  send(msg: InputFrame): void {
    this.sock.send(encodeInput(msg));
  }

  sendStick(phiX: number, phiY: number): void {
    this.send({ kind: "stick", phi_x: clampStick(phiX), phi_y: clampStick(phiY) });
  }

  sendOverride(value: boolean): void {
    this.send({ kind: "override", value });
  }

  sendReset(): void {
    this.send({ kind: "reset" });
  }

  sendModeSet(mode: "MC" | "CC"): void {
    this.send({ kind: "mode_set", mode });
  }

  sendCountSubmit(count: number): void {
    this.send({ kind: "count_submit", count });
  }

  close(): void {
    this.sock.close();
  }
}
