/** Rendering: pure view math (testable) + canvas painting.
 *
 * Screen convention: canvas y grows downward and world y is not flipped,
 * so a positive turn rate sweeps clockwise on screen in both views. In the
 * robot-camera view the vehicle sits at a fixed anchor pointing up; pushing
 * the stick right (+phi_y) therefore turns the view to the right.
 */

import type { PathRun, ScenarioDoc } from "./geometry.js";
import { courseBounds, objectWorld, pathRuns, totalLength } from "./geometry.js";
import type { CockpitViewModel } from "./viewmodel.js";
import { showPaused } from "./viewmodel.js";

/** Guidance force that renders as a full-length arrow: the stick-dynamics
 * force bound (twice the guidance stiffness K_p = 2). */
export const GUIDANCE_FULL_SCALE = 4.0;

export interface GuidanceArrow {
  dir: -1 | 0 | 1; // sign of the guidance force F
  len: number; // 0..1, |F| relative to full scale
}

/** Lateral guidance cue: direction is exactly sign(F). */
export function guidanceArrow(f: number): GuidanceArrow {
  const dir = f > 0 ? 1 : f < 0 ? -1 : 0;
  return { dir, len: Math.min(Math.abs(f) / GUIDANCE_FULL_SCALE, 1) };
}

/** Spoke angles for an n-slit inspection-object glyph. */
export function slitAngles(n: number): number[] {
  const out: number[] = [];
  for (let i = 0; i < n; i++) out.push((2 * Math.PI * i) / n);
  return out;
}

export type Transform = (wx: number, wy: number) => [number, number];

/** Robot-camera view: robot pinned at (cx, cy), heading up, `scale` px/m. */
export function cameraTransform(
  robot: { x: number; y: number; theta: number },
  cx: number,
  cy: number,
  scale: number,
): Transform {
  const sin = Math.sin(robot.theta);
  const cos = Math.cos(robot.theta);
  return (wx, wy) => {
    const rx = wx - robot.x;
    const ry = wy - robot.y;
    return [cx + scale * (-sin * rx + cos * ry), cy + scale * (-cos * rx - sin * ry)];
  };
}

/** Map view: fit the course bounds into a w x h screen. */
export function mapTransform(
  bounds: { minX: number; minY: number; maxX: number; maxY: number },
  w: number,
  h: number,
): { tf: Transform; scale: number } {
  const bw = bounds.maxX - bounds.minX;
  const bh = bounds.maxY - bounds.minY;
  const scale = 0.92 * Math.min(w / bw, h / bh);
  const ox = (w - scale * bw) / 2 - scale * bounds.minX;
  const oy = (h - scale * bh) / 2 - scale * bounds.minY;
  return { tf: (wx, wy) => [ox + scale * wx, oy + scale * wy], scale };
}

// ---- course geometry prepared once per scenario ----------------------------

export interface CourseGeometry {
  runs: PathRun[];
  objects: { x: number; y: number; slit_count: number }[];
  bounds: { minX: number; minY: number; maxX: number; maxY: number };
  totalLength: number;
  sensingRadius: number;
}

export function buildCourseGeometry(doc: ScenarioDoc): CourseGeometry {
  return {
    runs: pathRuns(doc.path, doc.gaps),
    objects: doc.objects.map((ob) => ({ ...objectWorld(doc.path, ob), slit_count: ob.slit_count })),
    bounds: courseBounds(doc.path),
    totalLength: totalLength(doc.path),
    sensingRadius: doc.sensing_radius,
  };
}

// ---- canvas painting --------------------------------------------------------

const COLORS = {
  bg: "#10151c",
  marked: "#e8e3d4",
  gap: "#5a6373",
  object: "#8fd0ff",
  robot: "#ffd24d",
  sensing: "rgba(255, 210, 77, 0.18)",
  hud: "#d6dde8",
  warn: "#ff7a66",
  guide: "#6fe08c",
  stick: "#d6dde8",
};

function drawCourse(ctx: CanvasRenderingContext2D, geom: CourseGeometry, tf: Transform): void {
  for (const run of geom.runs) {
    ctx.beginPath();
    run.pts.forEach(([wx, wy], i) => {
      const [sx, sy] = tf(wx, wy);
      if (i === 0) ctx.moveTo(sx, sy);
      else ctx.lineTo(sx, sy);
    });
    ctx.strokeStyle = run.marked ? COLORS.marked : COLORS.gap;
    ctx.lineWidth = run.marked ? 3 : 1.5;
    ctx.setLineDash(run.marked ? [] : [4, 6]);
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

function drawObjects(
  ctx: CanvasRenderingContext2D,
  geom: CourseGeometry,
  tf: Transform,
  pxPerM: number,
): void {
  const r = Math.max(4, 0.12 * pxPerM);
  ctx.strokeStyle = COLORS.object;
  ctx.fillStyle = COLORS.object;
  ctx.lineWidth = 1.5;
  for (const ob of geom.objects) {
    const [sx, sy] = tf(ob.x, ob.y);
    ctx.beginPath();
    ctx.arc(sx, sy, r, 0, 2 * Math.PI);
    ctx.stroke();
    for (const a of slitAngles(ob.slit_count)) {
      ctx.beginPath();
      ctx.moveTo(sx + 0.35 * r * Math.cos(a), sy + 0.35 * r * Math.sin(a));
      ctx.lineTo(sx + r * Math.cos(a), sy + r * Math.sin(a));
      ctx.stroke();
    }
  }
}

function drawRobotMarker(
  ctx: CanvasRenderingContext2D,
  sx: number,
  sy: number,
  screenHeading: number, // radians, canvas convention
  pxPerM: number,
  sensingRadius: number,
): void {
  ctx.fillStyle = COLORS.sensing;
  ctx.beginPath();
  ctx.arc(sx, sy, sensingRadius * pxPerM, 0, 2 * Math.PI);
  ctx.fill();
  const size = Math.max(7, 0.16 * pxPerM);
  const tip = [sx + size * Math.cos(screenHeading), sy + size * Math.sin(screenHeading)];
  const left = [
    sx + 0.7 * size * Math.cos(screenHeading + 2.5),
    sy + 0.7 * size * Math.sin(screenHeading + 2.5),
  ];
  const right = [
    sx + 0.7 * size * Math.cos(screenHeading - 2.5),
    sy + 0.7 * size * Math.sin(screenHeading - 2.5),
  ];
  ctx.fillStyle = COLORS.robot;
  ctx.beginPath();
  ctx.moveTo(tip[0], tip[1]);
  ctx.lineTo(left[0], left[1]);
  ctx.lineTo(right[0], right[1]);
  ctx.closePath();
  ctx.fill();
}

function drawGuidanceBar(
  ctx: CanvasRenderingContext2D,
  vm: CockpitViewModel,
  w: number,
  h: number,
): void {
  const snap = vm.snapshot;
  if (!snap) return;
  const cx = w / 2;
  const cy = h - 46;
  const half = Math.min(180, w * 0.28);
  ctx.strokeStyle = "#39414e";
  ctx.lineWidth = 4;
  ctx.beginPath();
  ctx.moveTo(cx - half, cy);
  ctx.lineTo(cx + half, cy);
  ctx.stroke();
  // suggested deflection and actual stick position markers
  for (const [value, color, height] of [
    [snap.phi_d, COLORS.guide, 12],
    [snap.phi_y, COLORS.stick, 8],
  ] as [number, string, number][]) {
    const x = cx + half * Math.min(Math.max(value, -1), 1);
    ctx.strokeStyle = color;
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(x, cy - height);
    ctx.lineTo(x, cy + height);
    ctx.stroke();
  }
  // guidance force arrow: sign(F) gives the direction to move the stick
  const arrow = guidanceArrow(snap.f);
  if (arrow.dir !== 0) {
    const len = Math.max(10, arrow.len * half);
    const x1 = cx + arrow.dir * len;
    ctx.strokeStyle = COLORS.guide;
    ctx.lineWidth = 3;
    ctx.beginPath();
    ctx.moveTo(cx, cy - 24);
    ctx.lineTo(x1, cy - 24);
    ctx.moveTo(x1, cy - 24);
    ctx.lineTo(x1 - arrow.dir * 7, cy - 30);
    ctx.moveTo(x1, cy - 24);
    ctx.lineTo(x1 - arrow.dir * 7, cy - 18);
    ctx.stroke();
  }
  ctx.fillStyle = COLORS.hud;
  ctx.font = "11px ui-monospace, monospace";
  ctx.textAlign = "center";
  ctx.fillText("guidance / stick", cx, cy + 26);
  ctx.textAlign = "left";
}

function drawHud(ctx: CanvasRenderingContext2D, vm: CockpitViewModel, w: number): void {
  const snap = vm.snapshot;
  ctx.fillStyle = COLORS.hud;
  ctx.font = "13px ui-monospace, monospace";
  const role = vm.hello ? vm.hello.role : "-";
  const lines = snap
    ? [
        `t ${snap.t.toFixed(2)} s   mode ${snap.mode}   status ${snap.status}   role ${role}`,
        `V ${snap.v.toFixed(3)} m/s   u ${snap.u.toFixed(3)} rad/s   beta ${snap.beta.toFixed(3)}`,
        `e2 ${snap.e2.toFixed(3)} m   e3 ${snap.e3.toFixed(3)} rad   s ${snap.s.toFixed(2)} m`,
        `count entry: ${vm.countEntry}   view ${vm.view}`,
      ]
    : [`connecting (${vm.connection})`];
  lines.forEach((line, i) => ctx.fillText(line, 12, 22 + 18 * i));
  if (snap && !snap.detected) {
    ctx.fillStyle = COLORS.warn;
    ctx.font = "bold 16px ui-monospace, monospace";
    ctx.fillText("PATH LOST — assistance off", 12, 22 + 18 * 4 + 6);
  }
  if (vm.lastError) {
    ctx.fillStyle = COLORS.warn;
    ctx.font = "12px ui-monospace, monospace";
    ctx.fillText(`server: ${vm.lastError}`, 12, 22 + 18 * 5 + 10);
  }
  if (vm.inputNotice) {
    ctx.fillStyle = COLORS.warn;
    ctx.font = "12px ui-monospace, monospace";
    ctx.textAlign = "right";
    ctx.fillText(vm.inputNotice, w - 12, 22);
    ctx.textAlign = "left";
  }
}

function drawOverlay(ctx: CanvasRenderingContext2D, label: string, w: number, h: number): void {
  ctx.fillStyle = "rgba(8, 10, 14, 0.55)";
  ctx.fillRect(0, 0, w, h);
  ctx.fillStyle = COLORS.hud;
  ctx.font = "bold 34px ui-monospace, monospace";
  ctx.textAlign = "center";
  ctx.fillText(label, w / 2, h / 2);
  ctx.textAlign = "left";
}

/** Paint one frame from the current view model. */
export function drawScene(
  ctx: CanvasRenderingContext2D,
  vm: CockpitViewModel,
  geom: CourseGeometry,
  w: number,
  h: number,
  nowMs: number,
): void {
  ctx.fillStyle = COLORS.bg;
  ctx.fillRect(0, 0, w, h);
  const snap = vm.snapshot;
  if (snap) {
    if (vm.view === "camera") {
      const scale = Math.min(w, h) / 6; // ~6 m window around the robot
      const tf = cameraTransform(snap, w / 2, h * 0.62, scale);
      drawCourse(ctx, geom, tf);
      drawObjects(ctx, geom, tf, scale);
      drawRobotMarker(ctx, w / 2, h * 0.62, -Math.PI / 2, scale, geom.sensingRadius);
    } else {
      const { tf, scale } = mapTransform(geom.bounds, w, h);
      drawCourse(ctx, geom, tf);
      drawObjects(ctx, geom, tf, scale);
      const [sx, sy] = tf(snap.x, snap.y);
      drawRobotMarker(ctx, sx, sy, snap.theta, scale, geom.sensingRadius);
    }
    drawGuidanceBar(ctx, vm, w, h);
  }
  drawHud(ctx, vm, w);
  if (snap && (snap.status === "completed" || snap.status === "timeout" || snap.status === "aborted")) {
    drawOverlay(ctx, snap.status.toUpperCase(), w, h);
  } else if (showPaused(vm, nowMs)) {
    drawOverlay(ctx, "PAUSED", w, h);
  }
}
