/**
 * Instrument panel: speed and heading readouts, monitor badges, the blend
 * split between driver and assist, and the passthrough indicator used to
 * eyeball n=1 behavior end to end.
 */

import { isPassthrough, type TickRecord } from "./messages.js";

export type BadgeTone = "ok" | "warn" | "off";

export interface Badge {
  id: string;
  label: string;
  tone: BadgeTone;
}

/** Monitor flags and the degraded marker as displayable badges. */
export function monitorBadges(record: TickRecord): Badge[] {
  const flag = (ok: boolean): BadgeTone => (ok ? "ok" : "warn");
  return [
    { id: "velocity", label: "velocity", tone: flag(record.monitors.velocity_ok) },
    { id: "steering", label: "steering", tone: flag(record.monitors.steering_ok) },
    { id: "stability", label: "stability", tone: flag(record.monitors.stability_ok) },
    {
      id: "degraded",
      label: record.degraded ? "degraded" : "in domain",
      tone: record.degraded ? "warn" : "off",
    },
    {
      id: "passthrough",
      label: "n=1 passthrough",
      tone: isPassthrough(record) ? "ok" : "off",
    },
  ];
}

/** Relative share of the blended speed command contributed by the assist. */
export function assistShare(record: TickRecord): number {
  const user = Math.abs(record.user_cmd.u_v_u) + Math.abs(record.user_cmd.u_omega_u);
  const total =
    user + Math.abs(record.blended.u_v - record.user_cmd.u_v_u) +
    Math.abs(record.blended.u_omega - record.user_cmd.u_omega_u);
  if (total === 0) return 0;
  return 1 - user / total;
}

export function formatFixed(value: number, digits = 2): string {
  return Number.isFinite(value) ? value.toFixed(digits) : "--";
}

/** Heading in degrees, wrapped to (-180, 180] for the dial text. */
export function headingDegrees(psi: number): number {
  const deg = (psi * 180) / Math.PI;
  let wrapped = deg % 360;
  if (wrapped > 180) wrapped -= 360;
  if (wrapped <= -180) wrapped += 360;
  return wrapped;
}

/** Binds the panel's DOM nodes once, then updates them per state frame. */
export class GaugePanel {
  private readonly speedEl: HTMLElement;
  private readonly headingEl: HTMLElement;
  private readonly turnEl: HTMLElement;
  private readonly badgesEl: HTMLElement;
  private readonly shareEl: HTMLElement;

  constructor(root: ParentNode) {
    this.speedEl = must(root, "#gauge-speed");
    this.headingEl = must(root, "#gauge-heading");
    this.turnEl = must(root, "#gauge-turn");
    this.badgesEl = must(root, "#badges");
    this.shareEl = must(root, "#assist-share");
  }

  update(record: TickRecord): void {
    this.speedEl.textContent = `${formatFixed(record.v_v)} m/s`;
    this.headingEl.textContent = `${formatFixed(headingDegrees(record.pose.psi), 1)}°`;
    this.turnEl.textContent = `${formatFixed(record.blended.u_omega)} rad/s`;
    this.shareEl.style.width = `${Math.round(assistShare(record) * 100)}%`;

    for (const badge of monitorBadges(record)) {
      let el = this.badgesEl.querySelector<HTMLElement>(`[data-badge="${badge.id}"]`);
      if (!el) {
        el = document.createElement("span");
        el.dataset.badge = badge.id;
        el.className = "badge";
        this.badgesEl.appendChild(el);
      }
      el.textContent = badge.label;
      el.dataset.tone = badge.tone;
    }
  }
}

function must(root: ParentNode, selector: string): HTMLElement {
  const el = root.querySelector<HTMLElement>(selector);
  if (!el) throw new Error(`missing element ${selector}`);
  return el;
}
