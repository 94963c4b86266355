/**
 * Virtual joystick pad.
 *
 * Vertical deflection is the speed axis (up = forward); horizontal is the
 * steering axis, which the service maps to a relative heading demand inside
 * (-pi/2, pi/2). The pad draws that clamp region as an arc so the driver can
 * see where the steering authority ends. Samples are throttled to at most
 * 60 Hz on the way out; the service holds the last input between frames.
 */

import { clamp, type JoystickSample } from "./messages.js";

export const MAX_SAMPLE_HZ = 60;

/** Map a pointer position inside the pad's box to a clamped sample. */
export function padPositionToSample(
  box: { left: number; top: number; width: number; height: number },
  clientX: number,
  clientY: number,
  timestamp: number,
): JoystickSample {
  const cx = box.left + box.width / 2;
  const cy = box.top + box.height / 2;
  // Half-size minus a knob margin so full deflection is reachable.
  const span = Math.min(box.width, box.height) * 0.42;
  return {
    steerNorm: clamp((clientX - cx) / span, -1, 1),
    vNorm: clamp((cy - clientY) / span, -1, 1),
    timestamp,
  };
}

export const CENTERED: Omit<JoystickSample, "timestamp"> = {
  vNorm: 0,
  steerNorm: 0,
};

/** Rate limiter: passes a sample through at most every 1000/maxHz ms. */
export class SampleThrottle {
  private lastSent = -Infinity;
  private readonly minGapMs: number;

  constructor(maxHz: number = MAX_SAMPLE_HZ) {
    if (maxHz <= 0) throw new Error("maxHz must be positive");
    this.minGapMs = 1000 / maxHz;
  }

  /** True when a sample at `timestamp` (ms) may be emitted. */
  admit(timestamp: number): boolean {
    if (timestamp - this.lastSent < this.minGapMs) return false;
    this.lastSent = timestamp;
    return true;
  }
}

/** Canvas-backed joystick widget; emits clamped samples via a callback. */
export class VirtualJoystick {
  private readonly canvas: HTMLCanvasElement;
  private readonly onSample: (sample: JoystickSample) => void;
  private readonly throttle = new SampleThrottle();
  private current: JoystickSample = { ...CENTERED, timestamp: 0 };
  private pointerId: number | null = null;

  constructor(canvas: HTMLCanvasElement, onSample: (s: JoystickSample) => void) {
    this.canvas = canvas;
    this.onSample = onSample;
    canvas.addEventListener("pointerdown", this.onDown);
    canvas.addEventListener("pointermove", this.onMove);
    canvas.addEventListener("pointerup", this.onUp);
    canvas.addEventListener("pointercancel", this.onUp);
    this.draw();
  }

  get sample(): JoystickSample {
    return this.current;
  }

  private emit(sample: JoystickSample, force = false): void {
    this.current = sample;
    if (force || this.throttle.admit(sample.timestamp)) {
      this.onSample(sample);
    }
    this.draw();
  }

  private sampleFromEvent(ev: PointerEvent): JoystickSample {
    const rect = this.canvas.getBoundingClientRect();
    return padPositionToSample(rect, ev.clientX, ev.clientY, performance.now());
  }

  private onDown = (ev: PointerEvent): void => {
    this.pointerId = ev.pointerId;
    this.canvas.setPointerCapture(ev.pointerId);
    this.emit(this.sampleFromEvent(ev));
  };

  private onMove = (ev: PointerEvent): void => {
    if (this.pointerId !== ev.pointerId) return;
    this.emit(this.sampleFromEvent(ev));
  };

  private onUp = (ev: PointerEvent): void => {
    if (this.pointerId !== ev.pointerId) return;
    this.pointerId = null;
    // Spring return: always send the release, bypassing the throttle, so
    // the service's zero-order hold cannot keep the vehicle driving.
    this.emit({ ...CENTERED, timestamp: performance.now() }, true);
  };

  draw(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const w = this.canvas.width;
    const h = this.canvas.height;
    const cx = w / 2;
    const cy = h / 2;
    const span = Math.min(w, h) * 0.42;

    ctx.clearRect(0, 0, w, h);

    // Steering clamp region: the service limits relative heading to just
    // inside a quarter turn either way; show it as an arc around the pad.
    ctx.beginPath();
    ctx.arc(cx, cy, span + 8, -Math.PI, 0);
    ctx.strokeStyle = "rgba(122, 162, 247, 0.35)";
    ctx.lineWidth = 6;
    ctx.stroke();

    // Crosshair.
    ctx.strokeStyle = "rgba(255, 255, 255, 0.12)";
    ctx.lineWidth = 1;
    ctx.beginPath();
    ctx.moveTo(cx - span, cy);
    ctx.lineTo(cx + span, cy);
    ctx.moveTo(cx, cy - span);
    ctx.lineTo(cx, cy + span);
    ctx.stroke();

    // Knob.
    const kx = cx + this.current.steerNorm * span;
    const ky = cy - this.current.vNorm * span;
    ctx.beginPath();
    ctx.arc(kx, ky, 14, 0, 2 * Math.PI);
    ctx.fillStyle = this.pointerId === null ? "#565f89" : "#7aa2f7";
    ctx.fill();
  }
}
