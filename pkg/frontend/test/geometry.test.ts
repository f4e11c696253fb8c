import { describe, expect, it } from "vitest";
import {
  courseBounds,
  markedIntervals,
  objectWorld,
  pathRuns,
  poseAt,
  totalLength,
  type PathSpec,
} from "../src/geometry.js";

const LINE: PathSpec = { start: [0, 0, 0], segments: [{ kind: "line", length: 2 }] };

// start pose and segment list of the shipped U-shaped course
const U: PathSpec = {
  start: [4.3, 0.5, Math.PI],
  segments: [
    { kind: "line", length: 3.1 },
    { kind: "arc", radius: 0.6, angle: -Math.PI / 2 },
    { kind: "line", length: 0.8 },
    { kind: "arc", radius: 0.6, angle: -Math.PI / 2 },
    { kind: "line", length: 3.1 },
  ],
};

describe("poses along the course", () => {
  it("walks a straight line", () => {
    const p = poseAt(LINE, 1.0);
    expect(p.x).toBeCloseTo(1.0, 12);
    expect(p.y).toBeCloseTo(0.0, 12);
    expect(p.theta).toBeCloseTo(0.0, 12);
  });

  it("clamps beyond-range arclengths", () => {
    expect(poseAt(LINE, -5).x).toBeCloseTo(0, 12);
    expect(poseAt(LINE, 99).x).toBeCloseTo(2, 12);
  });

  it("quarter arcs end where the circle geometry says", () => {
    const ccw: PathSpec = { start: [0, 0, 0], segments: [{ kind: "arc", radius: 1, angle: Math.PI / 2 }] };
    let p = poseAt(ccw, totalLength(ccw));
    expect(p.x).toBeCloseTo(1, 12);
    expect(p.y).toBeCloseTo(1, 12);
    expect(p.theta).toBeCloseTo(Math.PI / 2, 12);

    const cw: PathSpec = { start: [0, 0, 0], segments: [{ kind: "arc", radius: 1, angle: -Math.PI / 2 }] };
    p = poseAt(cw, totalLength(cw));
    expect(p.x).toBeCloseTo(1, 12);
    expect(p.y).toBeCloseTo(-1, 12);
    expect(p.theta).toBeCloseTo(-Math.PI / 2, 12);
  });

  it("measures the U-course length", () => {
    expect(totalLength(U)).toBeCloseTo(3.1 + 0.8 + 3.1 + 0.6 * Math.PI, 12);
  });

  it("the U-course ends parallel to its start, one lane over", () => {
    const end = poseAt(U, totalLength(U));
    // two -90 deg turns flip the heading from pi to 0
    expect(Math.atan2(Math.sin(end.theta), Math.cos(end.theta))).toBeCloseTo(0, 9);
    expect(end.x).toBeCloseTo(4.3, 9);
    // lane spacing = 2 * radius + straight connector
    expect(end.y).toBeCloseTo(0.5 + (2 * 0.6 + 0.8), 9);
  });
});

describe("inspection objects", () => {
  it("positive offset sits to the path's left", () => {
    const w = objectWorld(LINE, { s: 1, lateral_offset: 0.5, slit_count: 3 });
    expect(w.x).toBeCloseTo(1, 12);
    expect(w.y).toBeCloseTo(0.5, 12);
  });

  it("offset follows the local heading on arcs", () => {
    const ccw: PathSpec = { start: [0, 0, 0], segments: [{ kind: "arc", radius: 1, angle: Math.PI / 2 }] };
    const w = objectWorld(ccw, { s: totalLength(ccw), lateral_offset: 0.25, slit_count: 1 });
    // at the arc end the heading is +90 deg, so "left" points in -x
    expect(w.x).toBeCloseTo(1 - 0.25, 12);
    expect(w.y).toBeCloseTo(1, 12);
  });
});

describe("gap segmentation", () => {
  it("splits the course into alternating marked/gap runs", () => {
    const runs = markedIntervals(10, [
      [2, 3],
      [5, 6],
    ]);
    expect(runs).toEqual([
      { s0: 0, s1: 2, marked: true },
      { s0: 2, s1: 3, marked: false },
      { s0: 3, s1: 5, marked: true },
      { s0: 5, s1: 6, marked: false },
      { s0: 6, s1: 10, marked: true },
    ]);
  });

  it("clamps, sorts and merges overlapping gaps", () => {
    const runs = markedIntervals(4, [
      [3, 99],
      [-1, 1],
      [0.5, 2],
    ]);
    expect(runs).toEqual([
      { s0: 0, s1: 2, marked: false },
      { s0: 2, s1: 3, marked: true },
      { s0: 3, s1: 4, marked: false },
    ]);
  });

  it("polyline runs connect end to end", () => {
    const runs = pathRuns(U, [[1.4, 1.7]], 0.05);
    expect(runs.length).toBe(3);
    const [a, b, c] = runs;
    expect(b.marked).toBe(false);
    expect(a.pts[a.pts.length - 1]).toEqual(b.pts[0]);
    expect(b.pts[b.pts.length - 1]).toEqual(c.pts[0]);
    expect(c.s1).toBeCloseTo(totalLength(U), 12);
  });
});

describe("bounds", () => {
  it("covers the whole course plus margin", () => {
    // course extents: x in [0.6, 4.3], y in [0.5, 2.5]; margin 1 m
    const b = courseBounds(U, 1.0);
    expect(b.minX).toBeCloseTo(0.6 - 1.0, 2);
    expect(b.maxX).toBeCloseTo(4.3 + 1.0, 2);
    expect(b.minY).toBeCloseTo(0.5 - 1.0, 2);
    expect(b.maxY).toBeCloseTo(2.5 + 1.0, 2);
  });
});
