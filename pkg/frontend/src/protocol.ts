/** Teleop wire protocol v1 (see PROTOCOL.md at the repository root).
 *
 * JSON text frames. Unknown fields on inbound server frames are kept but
 * ignored; unknown kinds are rejected, mirroring the server's rules.
 */

export const PROTOCOL_VERSION = 1;

// ---- client -> server -----------------------------------------------------

export type InputFrame =
  | { kind: "hello"; v: number }
  | { kind: "stick"; phi_x: number; phi_y: number }
  | { kind: "override"; value: boolean }
  | { kind: "reset" }
  | { kind: "mode_set"; mode: "MC" | "CC" }
  | { kind: "count_submit"; count: number };

/** Clamp a stick value to its legal range; the server clamps too. */
export function clampStick(v: number): number {
  if (Number.isNaN(v)) return 0;
  return Math.min(Math.max(v, -1), 1);
}

export function encodeInput(msg: InputFrame): string {
  return JSON.stringify(msg);
}

// ---- server -> client -----------------------------------------------------

export interface HelloFrame {
  kind: "hello";
  v: number;
  role: "driver" | "observer";
  scenario_hash: string;
  mode: string;
  dt: number;
  total_length: number;
}

export interface ObjectInView {
  s: number;
  lateral_offset: number;
  slit_count: number;
  x: number;
  y: number;
}

export interface Snapshot {
  kind: "snapshot";
  t: number;
  x: number;
  y: number;
  theta: number;
  e1: number;
  e2: number;
  e3: number;
  detected: boolean;
  beta: number;
  u: number;
  phi_x: number;
  phi_y: number;
  phi_d: number;
  f: number;
  v: number;
  s: number;
  mode: string;
  status: string;
  objects: ObjectInView[];
}

export interface ErrorFrame {
  kind: "error";
  error: string;
  supported?: number[];
}

export type ServerFrame = HelloFrame | Snapshot | ErrorFrame;

const SERVER_KINDS = new Set(["hello", "snapshot", "error"]);

/** Parse one server frame; throws on garbage or an unknown kind. */
export function decodeServerFrame(text: string): ServerFrame {
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch {
    throw new Error("server frame is not valid JSON");
  }
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
    throw new Error("server frame must be a JSON object");
  }
  const kind = (obj as { kind?: unknown }).kind;
  if (typeof kind !== "string" || !SERVER_KINDS.has(kind)) {
    throw new Error(`unknown server frame kind ${JSON.stringify(kind)}`);
  }
  return obj as ServerFrame;
}

export function isSnapshot(f: ServerFrame): f is Snapshot {
  return f.kind === "snapshot";
}

export function isHello(f: ServerFrame): f is HelloFrame {
  return f.kind === "hello";
}

export function isError(f: ServerFrame): f is ErrorFrame {
  return f.kind === "error";
}
