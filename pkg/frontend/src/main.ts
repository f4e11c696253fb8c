/** Browser entry: wires the socket, input devices and canvas together.
 * All vehicle state comes from server snapshots; this file only routes
 * inputs out and paints what came back.
 */

import { CockpitClient, type SocketLike } from "./client.js";
import type { ScenarioDoc } from "./geometry.js";
import { KeyboardStick, readGamepad, type ButtonEvents } from "./input.js";
import { buildCourseGeometry, drawScene } from "./render.js";
import {
  adjustCount,
  applyFrame,
  initialViewModel,
  noteClosed,
  noteOpen,
  takeCount,
  toggleView,
} from "./viewmodel.js";

const SEND_HZ = 30;

async function boot(): Promise<void> {
  const canvas = document.getElementById("view") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("canvas 2d context unavailable");

  const fit = () => {
    canvas.width = window.innerWidth;
    canvas.height = window.innerHeight;
  };
  fit();
  window.addEventListener("resize", fit);

  const doc = (await (await fetch("/scenario")).json()) as ScenarioDoc;
  const geom = buildCourseGeometry(doc);

  const vm = initialViewModel();
  const wsProto = location.protocol === "https:" ? "wss:" : "ws:";
  const sock = new WebSocket(`${wsProto}//${location.host}/teleop`) as unknown as SocketLike;
  const client = new CockpitClient(sock);
  client.onSnapshot = (s) => applyFrame(vm, s, performance.now());
  client.onServerError = (e) => applyFrame(vm, e, performance.now());
  client.onClose = () => noteClosed(vm);
  client
    .start()
    .then((hello) => {
      noteOpen(vm);
      applyFrame(vm, hello, performance.now());
    })
    .catch((err) => {
      vm.lastError = String(err instanceof Error ? err.message : err);
      noteClosed(vm);
    });

  // ---- inputs --------------------------------------------------------------
  const kb = new KeyboardStick();
  const act = (ev: ButtonEvents | null) => {
    if (!ev || vm.connection !== "open") return;
    if (ev.override !== undefined) client.sendOverride(ev.override);
    if (ev.reset) client.sendReset();
    if (ev.modeToggle) client.sendModeSet(vm.snapshot?.mode === "CC" ? "MC" : "CC");
    if (ev.viewToggle) toggleView(vm);
    if (ev.countDelta) adjustCount(vm, ev.countDelta);
    if (ev.countSubmit) client.sendCountSubmit(takeCount(vm));
  };
  window.addEventListener("keydown", (e) => {
    if (e.repeat) return;
    act(kb.press(e.code));
    if (e.code.startsWith("Arrow") || e.code === "Space") e.preventDefault();
  });
  window.addEventListener("keyup", (e) => act(kb.release(e.code)));

  let padWasConnected = false;
  let padOverride = false;
  let padResetHeld = false;

  // fixed-rate input pump: keyboard ramp, gamepad override, one stick frame out
  let lastPump = performance.now();
  setInterval(() => {
    const now = performance.now();
    const dt = Math.min(0.1, (now - lastPump) / 1000);
    lastPump = now;
    const { phiX, phiY } = kb.update(dt);
    let x = phiX;
    let y = phiY;
    const pads = typeof navigator.getGamepads === "function" ? navigator.getGamepads() : [];
    const pad = readGamepad(pads && pads[0]);
    if (pad) {
      padWasConnected = true;
      vm.inputNotice = null;
      if (pad.phiX !== 0 || pad.phiY !== 0) {
        x = pad.phiX;
        y = pad.phiY;
      }
      if (pad.override !== padOverride && vm.connection === "open") {
        padOverride = pad.override;
        client.sendOverride(padOverride);
      }
      if (pad.reset && !padResetHeld && vm.connection === "open") client.sendReset();
      padResetHeld = pad.reset;
    } else if (padWasConnected) {
      vm.inputNotice = "gamepad lost — keyboard active";
    }
    if (vm.connection === "open" && client.hello?.role === "driver") {
      client.sendStick(x, y);
    }
  }, 1000 / SEND_HZ);

  // ---- paint ----------------------------------------------------------------
  const paint = () => {
    drawScene(ctx, vm, geom, canvas.width, canvas.height, performance.now());
    requestAnimationFrame(paint);
  };
  requestAnimationFrame(paint);
}

boot().catch((err) => {
  const el = document.getElementById("fatal");
  if (el) el.textContent = `failed to start: ${err}`;
});
