/** Input capture: keyboard (always available) and gamepad (optional).
 *
 * Axis keys move a virtual stick with a slew-rate ramp rather than
 * snapping, so a held key deflects smoothly to full scale. Convention:
 * forward (up/W) -> +phi_x, right (right/D) -> +phi_y.
 */

/** Full-scale deflections per second while ramping. */
export const DEFAULT_SLEW = 2.5;

/** Move `current` toward `target` by at most `maxStep`. */
export function slew(current: number, target: number, maxStep: number): number {
  const d = target - current;
  if (Math.abs(d) <= maxStep) return target;
  return current + Math.sign(d) * maxStep;
}

/** Discrete actions produced by key presses (not part of the stick). */
export interface ButtonEvents {
  override?: boolean; // momentary: true on press, false on release
  reset?: boolean;
  modeToggle?: boolean;
  viewToggle?: boolean;
  countDelta?: number;
  countSubmit?: boolean;
}

const AXIS_KEYS: Record<string, { axis: "x" | "y"; dir: 1 | -1 }> = {
  ArrowUp: { axis: "x", dir: 1 },
  KeyW: { axis: "x", dir: 1 },
  ArrowDown: { axis: "x", dir: -1 },
  KeyS: { axis: "x", dir: -1 },
  ArrowRight: { axis: "y", dir: 1 },
  KeyD: { axis: "y", dir: 1 },
  ArrowLeft: { axis: "y", dir: -1 },
  KeyA: { axis: "y", dir: -1 },
};

export class KeyboardStick {
  phiX = 0;
  phiY = 0;
  private held = new Set<string>();

  constructor(public slewPerSec: number = DEFAULT_SLEW) {}

  /** Handle a keydown by key code; returns discrete actions, if any. */
  press(code: string): ButtonEvents | null {
    if (code in AXIS_KEYS) {
      this.held.add(code);
      return null;
    }
    switch (code) {
      case "Space":
        return { override: true };
      case "KeyR":
        return { reset: true };
      case "KeyM":
        return { modeToggle: true };
      case "KeyV":
        return { viewToggle: true };
      case "KeyC":
        return { countDelta: 1 };
      case "KeyX":
        return { countDelta: -1 };
      case "Enter":
        return { countSubmit: true };
      default:
        return null;
    }
  }

  /** Handle a keyup; only the override is momentary. */
  release(code: string): ButtonEvents | null {
    if (code in AXIS_KEYS) {
      this.held.delete(code);
      return null;
    }
    return code === "Space" ? { override: false } : null;
  }

  /** Target per axis from held keys; opposing keys cancel to zero. */
  targets(): { x: number; y: number } {
    let x = 0;
    let y = 0;
    for (const code of this.held) {
      const k = AXIS_KEYS[code];
      if (k.axis === "x") x += k.dir;
      else y += k.dir;
    }
    return { x: Math.min(Math.max(x, -1), 1), y: Math.min(Math.max(y, -1), 1) };
  }

  /** Advance the ramp by dt seconds. */
  update(dtSec: number): { phiX: number; phiY: number } {
    const { x, y } = this.targets();
    const step = this.slewPerSec * dtSec;
    this.phiX = slew(this.phiX, x, step);
    this.phiY = slew(this.phiY, y, step);
    return { phiX: this.phiX, phiY: this.phiY };
  }
}

// ---- gamepad ---------------------------------------------------------------

export const GAMEPAD_DEADZONE = 0.15;

/** Minimal structural view of the Gamepad API, for testability. */
export interface PadLike {
  axes: ReadonlyArray<number>;
  buttons: ReadonlyArray<{ pressed: boolean }>;
}

export interface PadState {
  phiX: number;
  phiY: number;
  override: boolean;
  reset: boolean;
}

function deadzone(v: number): number {
  return Math.abs(v) < GAMEPAD_DEADZONE ? 0 : Math.min(Math.max(v, -1), 1);
}

/** Read the standard mapping: left stick drives, A = override, Start = reset.
 * Returns null when no usable pad is connected (keyboard fallback). */
export function readGamepad(pad: PadLike | null | undefined): PadState | null {
  if (!pad || pad.axes.length < 2) return null;
  return {
    phiX: deadzone(-pad.axes[1]), // stick pushed forward reads negative
    phiY: deadzone(pad.axes[0]),
    override: pad.buttons[0]?.pressed ?? false,
    reset: pad.buttons[9]?.pressed ?? false,
  };
}
