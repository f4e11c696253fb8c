/** Course geometry rebuilt from the scenario JSON (GET /scenario).
 *
 * The cockpit only draws the course; the vehicle state is always
 * server-authoritative. Poses follow the simulator's convention:
 * x/y in metres, theta in radians, a positive arc angle bends
 * counterclockwise.
 */

export interface Pose {
  x: number;
  y: number;
  theta: number;
}

export type Segment =
  | { kind: "line"; length: number }
  | { kind: "arc"; radius: number; angle: number };

export interface PathSpec {
  start: [number, number, number];
  segments: Segment[];
}

export interface ObjectSpec {
  s: number;
  lateral_offset: number;
  slit_count: number;
}

/** The slice of the scenario document the cockpit needs. */
export interface ScenarioDoc {
  path: PathSpec;
  gaps: [number, number][];
  objects: ObjectSpec[];
  sensing_radius: number;
  mode: string;
  dt: number;
}

export function segmentLength(seg: Segment): number {
  return seg.kind === "line" ? seg.length : seg.radius * Math.abs(seg.angle);
}

export function totalLength(spec: PathSpec): number {
  return spec.segments.reduce((acc, seg) => acc + segmentLength(seg), 0);
}

function advance(pose: Pose, seg: Segment, ds: number): Pose {
  if (seg.kind === "line") {
    return {
      x: pose.x + ds * Math.cos(pose.theta),
      y: pose.y + ds * Math.sin(pose.theta),
      theta: pose.theta,
    };
  }
  const k = Math.sign(seg.angle) / seg.radius; // curvature
  const theta = pose.theta + k * ds;
  return {
    x: pose.x + (Math.sin(theta) - Math.sin(pose.theta)) / k,
    y: pose.y - (Math.cos(theta) - Math.cos(pose.theta)) / k,
    theta,
  };
}

/** Pose at arclength s, clamped to [0, total length]. */
export function poseAt(spec: PathSpec, s: number): Pose {
  let pose: Pose = { x: spec.start[0], y: spec.start[1], theta: spec.start[2] };
  let remaining = Math.max(0, Math.min(s, totalLength(spec)));
  for (const seg of spec.segments) {
    const len = segmentLength(seg);
    if (remaining <= len) return advance(pose, seg, remaining);
    pose = advance(pose, seg, len);
    remaining -= len;
  }
  return pose;
}

/** World position of an inspection object (offset is to the path's left). */
export function objectWorld(spec: PathSpec, ob: ObjectSpec): { x: number; y: number } {
  const p = poseAt(spec, ob.s);
  return {
    x: p.x - ob.lateral_offset * Math.sin(p.theta),
    y: p.y + ob.lateral_offset * Math.cos(p.theta),
  };
}

export interface PathRun {
  s0: number;
  s1: number;
  marked: boolean; // false inside a marking gap
  pts: [number, number][];
}

/** Split [0, L] into marked/gap runs; gaps are clamped and merged. */
export function markedIntervals(
  length: number,
  gaps: [number, number][],
): { s0: number; s1: number; marked: boolean }[] {
  const clean = gaps
    .map(([a, b]) => [Math.max(0, Math.min(a, length)), Math.max(0, Math.min(b, length))] as [number, number])
    .filter(([a, b]) => b > a)
    .sort((p, q) => p[0] - q[0]);
  const merged: [number, number][] = [];
  for (const [a, b] of clean) {
    const last = merged[merged.length - 1];
    if (last && a <= last[1]) last[1] = Math.max(last[1], b);
    else merged.push([a, b]);
  }
  const out: { s0: number; s1: number; marked: boolean }[] = [];
  let cursor = 0;
  for (const [a, b] of merged) {
    if (a > cursor) out.push({ s0: cursor, s1: a, marked: true });
    out.push({ s0: a, s1: b, marked: false });
    cursor = b;
  }
  if (cursor < length) out.push({ s0: cursor, s1: length, marked: true });
  return out;
}

/** Polyline runs for drawing, one per marked/gap interval. */
export function pathRuns(spec: PathSpec, gaps: [number, number][], ds = 0.05): PathRun[] {
  return markedIntervals(totalLength(spec), gaps).map(({ s0, s1, marked }) => {
    const n = Math.max(1, Math.ceil((s1 - s0) / ds));
    const pts: [number, number][] = [];
    for (let i = 0; i <= n; i++) {
      const p = poseAt(spec, s0 + ((s1 - s0) * i) / n);
      pts.push([p.x, p.y]);
    }
    return { s0, s1, marked, pts };
  });
}

/** Axis-aligned bounds of the course with a margin, for the map view. */
export function courseBounds(
  spec: PathSpec,
  margin = 1.0,
): { minX: number; minY: number; maxX: number; maxY: number } {
  let minX = Infinity;
  let minY = Infinity;
  let maxX = -Infinity;
  let maxY = -Infinity;
  const L = totalLength(spec);
  const n = Math.max(2, Math.ceil(L / 0.05));
  for (let i = 0; i <= n; i++) {
    const p = poseAt(spec, (L * i) / n);
    minX = Math.min(minX, p.x);
    minY = Math.min(minY, p.y);
    maxX = Math.max(maxX, p.x);
    maxY = Math.max(maxY, p.y);
  }
  return { minX: minX - margin, minY: minY - margin, maxX: maxX + margin, maxY: maxY + margin };
}
