/** Cockpit state: the latest server-authoritative snapshot plus purely
 * presentational bits (connection, selected view, count entry). The UI
 * never simulates anything locally.
 */

import type { HelloFrame, ServerFrame, Snapshot } from "./protocol.js";

export type View = "camera" | "map";
export type Connection = "connecting" | "open" | "closed";

/** Snapshots older than this (wall clock) render a PAUSED overlay. */
export const STALE_MS = 1000;

export interface CockpitViewModel {
  connection: Connection;
  hello: HelloFrame | null;
  snapshot: Snapshot | null;
  lastSnapshotWallMs: number | null;
  view: View;
  countEntry: number;
  lastError: string | null;
  inputNotice: string | null; // e.g. gamepad lost -> keyboard fallback
}

export function initialViewModel(): CockpitViewModel {
  return {
    connection: "connecting",
    hello: null,
    snapshot: null,
    lastSnapshotWallMs: null,
    view: "camera",
    countEntry: 0,
    lastError: null,
    inputNotice: null,
  };
}

export function applyFrame(vm: CockpitViewModel, frame: ServerFrame, nowMs: number): void {
  switch (frame.kind) {
    case "hello":
      vm.hello = frame;
      break;
    case "snapshot":
      vm.snapshot = frame;
      vm.lastSnapshotWallMs = nowMs;
      break;
    case "error":
      vm.lastError = frame.error;
      break;
  }
}

export function noteOpen(vm: CockpitViewModel): void {
  vm.connection = "open";
}

export function noteClosed(vm: CockpitViewModel): void {
  vm.connection = "closed";
}

/** True when the stream has gone quiet for longer than STALE_MS. */
export function isStale(vm: CockpitViewModel, nowMs: number): boolean {
  if (vm.connection !== "open" || vm.lastSnapshotWallMs === null) return true;
  return nowMs - vm.lastSnapshotWallMs > STALE_MS;
}

/** The run is not advancing: server says paused, or the feed is stale. */
export function showPaused(vm: CockpitViewModel, nowMs: number): boolean {
  return vm.snapshot?.status === "paused" || isStale(vm, nowMs);
}

export function toggleView(vm: CockpitViewModel): void {
  vm.view = vm.view === "camera" ? "map" : "camera";
}

export function adjustCount(vm: CockpitViewModel, delta: number): void {
  vm.countEntry = Math.max(0, vm.countEntry + delta);
}

/** Returns the submitted value and clears the entry. */
export function takeCount(vm: CockpitViewModel): number {
  const n = vm.countEntry;
  vm.countEntry = 0;
  return n;
}
