/**
 * Running readouts computed client-side from the state stream: an effort
 * cycle counter and a windowed steering-smoothness value. Both mirror the
 * definitions the service uses in its own run summaries so the live numbers
 * and a later `summarize` agree in kind.
 */

import type { TickRecord } from "./messages.js";

export const EFFORT_HIGH_FRAC = 0.8;
export const EFFORT_LOW_FRAC = 0.05;

/**
 * Latched high/low speed-command cycle counter. One cycle is a rise above
 * the high threshold followed by a fall below the low one; the latch means
 * chatter around a single threshold never counts.
 */
export class EffortCounter {
  private armed = false;
  private cycles_ = 0;

  constructor(private readonly vMax: number) {
    if (!(vMax > 0)) throw new Error("vMax must be positive");
  }

  get cycles(): number {
    return this.cycles_;
  }

  push(vCmd: number): void {
    if (!this.armed && vCmd >= EFFORT_HIGH_FRAC * this.vMax) {
      this.armed = true;
    } else if (this.armed && vCmd <= EFFORT_LOW_FRAC * this.vMax) {
      this.armed = false;
      this.cycles_ += 1;
    }
  }

  reset(): void {
    this.armed = false;
    this.cycles_ = 0;
  }
}

/**
 * Windowed mean squared heading jerk: second difference of the heading
 * rate over the most recent `window` ticks. Zero until three rate samples
 * exist, exactly zero while the rate is constant.
 */
export class SmoothnessWindow {
  private readonly psis: number[] = [];
  private readonly ts: number[] = [];

  constructor(private readonly window: number = 250) {
    if (!Number.isInteger(window) || window < 4) {
      throw new Error("window must be an integer >= 4");
    }
  }

  push(t: number, psi: number): void {
    this.psis.push(psi);
    this.ts.push(t);
    if (this.psis.length > this.window) {
      this.psis.shift();
      this.ts.shift();
    }
  }

  reset(): void {
    this.psis.length = 0;
    this.ts.length = 0;
  }

  value(): number {
    const n = this.psis.length;
    if (n < 3) return 0;
    const rates: number[] = [];
    for (let i = 1; i < n; i++) {
      const dt = this.ts[i]! - this.ts[i - 1]!;
      if (!(dt > 0)) return 0;
      rates.push((this.psis[i]! - this.psis[i - 1]!) / dt);
    }
    let sum = 0;
    for (let i = 1; i < rates.length; i++) {
      const dt = this.ts[i + 1]! - this.ts[i]!;
      const jerk = (rates[i]! - rates[i - 1]!) / dt;
      sum += jerk * jerk;
    }
    return sum / (rates.length - 1);
  }
}

/** Everything the readout panel needs, updated once per state frame. */
export class RunningMetrics {
  readonly effort: EffortCounter;
  readonly smoothness: SmoothnessWindow;
  private violations = { velocity: 0, steering: 0, stability: 0 };
  private degradedTicks = 0;

  constructor(vMax: number, smoothnessWindow = 250) {
    this.effort = new EffortCounter(vMax);
    this.smoothness = new SmoothnessWindow(smoothnessWindow);
  }

  push(record: TickRecord): void {
    this.effort.push(record.raw.v_cmd);
    this.smoothness.push(record.t, record.pose.psi);
    if (!record.monitors.velocity_ok) this.violations.velocity += 1;
    if (!record.monitors.steering_ok) this.violations.steering += 1;
    if (!record.monitors.stability_ok) this.violations.stability += 1;
    if (record.degraded) this.degradedTicks += 1;
  }

  reset(): void {
    this.effort.reset();
    this.smoothness.reset();
    this.violations = { velocity: 0, steering: 0, stability: 0 };
    this.degradedTicks = 0;
  }

  snapshot(): {
    effortCycles: number;
    smoothness: number;
    violations: { velocity: number; steering: number; stability: number };
    degradedTicks: number;
  } {
    return {
      effortCycles: this.effort.cycles,
      smoothness: this.smoothness.value(),
      violations: { ...this.violations },
      degradedTicks: this.degradedTicks,
    };
  }
}
