/**
 * Wire protocol between the cockpit and the driving session service.
 *
 * The shapes are mirrored by hand from the service's JSON frames; the
 * cockpit is a read-only consumer and only ever influences the simulation
 * by sending one of the outbound message types below.
 */

export interface JoystickSample {
  /** Forward deflection, up positive, clamped to [-1, 1]. */
  vNorm: number;
  /** Steering deflection, right positive, clamped to [-1, 1]. */
  steerNorm: number;
  /** Milliseconds, performance.now() clock. */
  timestamp: number;
}

// ---------------------------------------------------------------------------
// Outbound (cockpit -> service)

export interface InputMessage {
  type: "input";
  v_norm: number;
  steer_norm: number;
}

export interface SetConfigMessage {
  type: "set_config";
  config: Record<string, number>;
}

export interface ResetMessage {
  type: "reset";
  route?: string;
  scale?: number;
}

export interface RecordMessage {
  type: "record";
  on: boolean;
}

export type OutboundMessage =
  | InputMessage
  | SetConfigMessage
  | ResetMessage
  | RecordMessage;

// ---------------------------------------------------------------------------
// Inbound (service -> cockpit)

export interface Pose {
  x: number;
  y: number;
  psi: number;
}

export interface TickRecord {
  t: number;
  pose: Pose;
  v_v: number;
  psi_dot: number;
  raw: { v_cmd: number; psi_cmd: number };
  user_cmd: { u_v_u: number; u_omega_u: number };
  ctrl_cmd: { u_v_c: number; u_omega_c: number };
  blended: { u_v: number; u_omega: number };
  arc_inputs: { alpha_s: number; gamma_s: number; delta: number };
  monitors: { velocity_ok: boolean; steering_ok: boolean; stability_ok: boolean };
  degraded: boolean;
}

export interface StateMessage {
  type: "state";
  tick: number;
  record: TickRecord;
}

export interface ConfigAckMessage {
  type: "config_ack";
  config: Record<string, number>;
}

export interface ErrorMessage {
  type: "error";
  code: string;
  text: string;
}

export type InboundMessage = StateMessage | ConfigAckMessage | ErrorMessage;

// ---------------------------------------------------------------------------

export function clamp(value: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, value));
}

/** Normalize a joystick sample into the input frame the service expects. */
export function joystickToMessage(sample: JoystickSample): InputMessage {
  return {
    type: "input",
    v_norm: clamp(sample.vNorm, -1, 1),
    steer_norm: clamp(sample.steerNorm, -1, 1),
  };
}

function isFiniteNumber(value: unknown): value is number {
  return typeof value === "number" && Number.isFinite(value);
}

function isPose(value: unknown): value is Pose {
  if (typeof value !== "object" || value === null) return false;
  const p = value as Record<string, unknown>;
  return isFiniteNumber(p.x) && isFiniteNumber(p.y) && isFiniteNumber(p.psi);
}

function isPairOf(value: unknown, a: string, b: string): boolean {
  if (typeof value !== "object" || value === null) return false;
  const o = value as Record<string, unknown>;
  return isFiniteNumber(o[a]) && isFiniteNumber(o[b]);
}

function isTickRecord(value: unknown): value is TickRecord {
  if (typeof value !== "object" || value === null) return false;
  const r = value as Record<string, unknown>;
  const monitors = r.monitors as Record<string, unknown> | undefined;
  return (
    isFiniteNumber(r.t) &&
    isPose(r.pose) &&
    isFiniteNumber(r.v_v) &&
    isFiniteNumber(r.psi_dot) &&
    isPairOf(r.raw, "v_cmd", "psi_cmd") &&
    isPairOf(r.user_cmd, "u_v_u", "u_omega_u") &&
    isPairOf(r.ctrl_cmd, "u_v_c", "u_omega_c") &&
    isPairOf(r.blended, "u_v", "u_omega") &&
    typeof monitors === "object" &&
    monitors !== null &&
    typeof monitors.velocity_ok === "boolean" &&
    typeof monitors.steering_ok === "boolean" &&
    typeof monitors.stability_ok === "boolean" &&
    typeof r.degraded === "boolean"
  );
}

/**
 * Parse one websocket text frame. Returns null for anything that is not a
 * well-formed inbound message; the caller shows a banner and keeps running.
 */
export function parseInbound(text: string): InboundMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const frame = data as Record<string, unknown>;
  switch (frame.type) {
    case "state":
      return isFiniteNumber(frame.tick) && isTickRecord(frame.record)
        ? (frame as unknown as StateMessage)
        : null;
    case "config_ack":
      return typeof frame.config === "object" && frame.config !== null
        ? (frame as unknown as ConfigAckMessage)
        : null;
    case "error":
      return typeof frame.code === "string" && typeof frame.text === "string"
        ? (frame as unknown as ErrorMessage)
        : null;
    default:
      return null;
  }
}

/**
 * True when the blended command equals the user command, i.e. the assist is
 * contributing nothing and the driver is in pure passthrough (n = 1).
 */
export function isPassthrough(record: TickRecord, tol = 1e-12): boolean {
  return (
    Math.abs(record.blended.u_v - record.user_cmd.u_v_u) <= tol &&
    Math.abs(record.blended.u_omega - record.user_cmd.u_omega_u) <= tol
  );
}
