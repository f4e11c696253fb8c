import { describe, expect, it } from "vitest";
import {
  DEFAULT_SLEW,
  GAMEPAD_DEADZONE,
  KeyboardStick,
  readGamepad,
  slew,
} from "../src/input.js";

describe("slew", () => {
  it("limits the step toward the target", () => {
    expect(slew(0, 1, 0.25)).toBeCloseTo(0.25, 12);
    expect(slew(0.9, 1, 0.25)).toBe(1);
    expect(slew(0.5, -1, 0.25)).toBeCloseTo(0.25, 12);
    expect(slew(0.2, 0.2, 0.25)).toBe(0.2);
  });
});

describe("keyboard stick", () => {
  it("is centred with nothing held", () => {
    const kb = new KeyboardStick();
    expect(kb.update(0.1)).toEqual({ phiX: 0, phiY: 0 });
  });

  it("holding right ramps phi_y to +1 at the configured slew", () => {
    const kb = new KeyboardStick();
    kb.press("ArrowRight");
    const dt = 0.05;
    const steps = Math.ceil(1 / (DEFAULT_SLEW * dt));
    let y = 0;
    for (let i = 0; i < steps; i++) {
      const prev = y;
      y = kb.update(dt).phiY;
      expect(y - prev).toBeLessThanOrEqual(DEFAULT_SLEW * dt + 1e-12);
      expect(y).toBeGreaterThan(prev);
    }
    expect(y).toBe(1);
    // full scale is reached in exactly 1/slew seconds, not sooner
    expect(steps * dt).toBeCloseTo(1 / DEFAULT_SLEW, 9);
  });

  it("release ramps back to centre", () => {
    const kb = new KeyboardStick();
    kb.press("KeyW");
    for (let i = 0; i < 20; i++) kb.update(0.05);
    expect(kb.phiX).toBe(1);
    kb.release("KeyW");
    kb.update(0.1);
    expect(kb.phiX).toBeCloseTo(1 - DEFAULT_SLEW * 0.1, 12);
    for (let i = 0; i < 20; i++) kb.update(0.05);
    expect(kb.phiX).toBe(0);
  });

  it("opposing keys cancel", () => {
    const kb = new KeyboardStick();
    kb.press("ArrowLeft");
    kb.press("ArrowRight");
    expect(kb.targets()).toEqual({ x: 0, y: 0 });
  });

  it("maps action keys to protocol actions", () => {
    const kb = new KeyboardStick();
    expect(kb.press("Space")).toEqual({ override: true });
    expect(kb.release("Space")).toEqual({ override: false });
    expect(kb.press("KeyR")).toEqual({ reset: true });
    expect(kb.press("KeyM")).toEqual({ modeToggle: true });
    expect(kb.press("KeyV")).toEqual({ viewToggle: true });
    expect(kb.press("KeyC")).toEqual({ countDelta: 1 });
    expect(kb.press("KeyX")).toEqual({ countDelta: -1 });
    expect(kb.press("Enter")).toEqual({ countSubmit: true });
    expect(kb.press("KeyQ")).toBeNull();
    expect(kb.release("KeyR")).toBeNull();
  });
});

describe("gamepad", () => {
  it("returns null without a usable pad", () => {
    expect(readGamepad(null)).toBeNull();
    expect(readGamepad(undefined)).toBeNull();
    expect(readGamepad({ axes: [0.1], buttons: [] })).toBeNull();
  });

  it("applies the deadzone and inverts the forward axis", () => {
    const pad = { axes: [0.5, -0.8], buttons: [{ pressed: true }] };
    const st = readGamepad(pad)!;
    expect(st.phiX).toBeCloseTo(0.8, 12); // pushed forward
    expect(st.phiY).toBeCloseTo(0.5, 12);
    expect(st.override).toBe(true);
    expect(st.reset).toBe(false);

    const idle = readGamepad({ axes: [GAMEPAD_DEADZONE / 2, -GAMEPAD_DEADZONE / 2], buttons: [] })!;
    expect(idle.phiX).toBe(0);
    expect(idle.phiY).toBe(0);
  });
});
