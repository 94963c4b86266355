/**
 * Top-down trajectory view: reference route overlay plus a bounded ring
 * buffer of recent vehicle poses, drawn through a camera transform fitted
 * to whatever is on screen.
 */

import type { Pose } from "./messages.js";

export const DEFAULT_TRACE_POINTS = 10_000;

/** Fixed-capacity pose history; the oldest sample is overwritten first. */
export class PoseRing {
  private readonly xs: Float64Array;
  private readonly ys: Float64Array;
  private readonly psis: Float64Array;
  private head = 0;
  private count = 0;

  constructor(capacity: number = DEFAULT_TRACE_POINTS) {
    if (!Number.isInteger(capacity) || capacity <= 0) {
      throw new Error("trace capacity must be a positive integer");
    }
    this.xs = new Float64Array(capacity);
    this.ys = new Float64Array(capacity);
    this.psis = new Float64Array(capacity);
  }

  get length(): number {
    return this.count;
  }

  get capacity(): number {
    return this.xs.length;
  }

  push(pose: Pose): void {
    this.xs[this.head] = pose.x;
    this.ys[this.head] = pose.y;
    this.psis[this.head] = pose.psi;
    this.head = (this.head + 1) % this.capacity;
    this.count = Math.min(this.count + 1, this.capacity);
  }

  clear(): void {
    this.head = 0;
    this.count = 0;
  }

  /** Pose `i` steps back in time; 0 is the newest sample. */
  at(i: number): Pose {
    if (i < 0 || i >= this.count) throw new RangeError(`no sample ${i}`);
    const idx = (this.head - 1 - i + this.capacity * 2) % this.capacity;
    return { x: this.xs[idx]!, y: this.ys[idx]!, psi: this.psis[idx]! };
  }

  /** Oldest-to-newest iteration for drawing. */
  *chronological(): Generator<Pose> {
    for (let i = this.count - 1; i >= 0; i--) yield this.at(i);
  }
}

export interface Camera {
  /** Pixels per world metre. */
  scale: number;
  /** World coordinates of the canvas centre. */
  centerX: number;
  centerY: number;
}

export interface Bounds {
  minX: number;
  maxX: number;
  minY: number;
  maxY: number;
}

export function boundsOfPolyline(points: ReadonlyArray<readonly [number, number]>): Bounds {
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (const [x, y] of points) {
    minX = Math.min(minX, x);
    maxX = Math.max(maxX, x);
    minY = Math.min(minY, y);
    maxY = Math.max(maxY, y);
  }
  return { minX, maxX, minY, maxY };
}

/** Fit bounds into a canvas with a margin; degenerate bounds get a 1 m span. */
export function fitCamera(
  bounds: Bounds,
  canvasWidth: number,
  canvasHeight: number,
  marginPx = 30,
): Camera {
  const spanX = Math.max(bounds.maxX - bounds.minX, 1.0);
  const spanY = Math.max(bounds.maxY - bounds.minY, 1.0);
  const usableW = Math.max(canvasWidth - 2 * marginPx, 1);
  const usableH = Math.max(canvasHeight - 2 * marginPx, 1);
  return {
    scale: Math.min(usableW / spanX, usableH / spanY),
    centerX: (bounds.minX + bounds.maxX) / 2,
    centerY: (bounds.minY + bounds.maxY) / 2,
  };
}

/** World (x up-as-north, y) to canvas pixels; world y points up on screen. */
export function worldToScreen(
  cam: Camera,
  canvasWidth: number,
  canvasHeight: number,
  x: number,
  y: number,
): [number, number] {
  return [
    canvasWidth / 2 + (x - cam.centerX) * cam.scale,
    canvasHeight / 2 - (y - cam.centerY) * cam.scale,
  ];
}

export class TraceView {
  readonly ring: PoseRing;
  private route: ReadonlyArray<readonly [number, number]> = [];
  private routeClosed = false;
  private camera: Camera = { scale: 50, centerX: 0, centerY: 0 };

  constructor(capacity: number = DEFAULT_TRACE_POINTS) {
    this.ring = new PoseRing(capacity);
  }

  setRoute(
    points: ReadonlyArray<readonly [number, number]>,
    closed: boolean,
    canvasWidth: number,
    canvasHeight: number,
  ): void {
    this.route = points;
    this.routeClosed = closed;
    if (points.length > 0) {
      this.camera = fitCamera(boundsOfPolyline(points), canvasWidth, canvasHeight);
    }
  }

  appendPose(pose: Pose): void {
    this.ring.push(pose);
  }

  clearTrace(): void {
    this.ring.clear();
  }

  render(ctx: CanvasRenderingContext2D, width: number, height: number): void {
    ctx.clearRect(0, 0, width, height);
    const toScreen = (x: number, y: number) =>
      worldToScreen(this.camera, width, height, x, y);

    // Route overlay.
    if (this.route.length > 1) {
      ctx.beginPath();
      const first = this.route[0]!;
      ctx.moveTo(...toScreen(first[0], first[1]));
      for (let i = 1; i < this.route.length; i++) {
        const p = this.route[i]!;
        ctx.lineTo(...toScreen(p[0], p[1]));
      }
      if (this.routeClosed) ctx.closePath();
      ctx.strokeStyle = "rgba(158, 206, 106, 0.5)";
      ctx.lineWidth = 2;
      ctx.stroke();
    }

    // Driven trace.
    if (this.ring.length > 1) {
      ctx.beginPath();
      let started = false;
      for (const pose of this.ring.chronological()) {
        const [sx, sy] = toScreen(pose.x, pose.y);
        if (!started) {
          ctx.moveTo(sx, sy);
          started = true;
        } else {
          ctx.lineTo(sx, sy);
        }
      }
      ctx.strokeStyle = "#7aa2f7";
      ctx.lineWidth = 1.5;
      ctx.stroke();
    }

    // Vehicle glyph: triangle pointing along the heading.
    if (this.ring.length > 0) {
      const pose = this.ring.at(0);
      const [sx, sy] = toScreen(pose.x, pose.y);
      const a = -pose.psi; // canvas y is flipped
      const size = 10;
      ctx.save();
      ctx.translate(sx, sy);
      ctx.rotate(a);
      ctx.beginPath();
      ctx.moveTo(size, 0);
      ctx.lineTo(-size * 0.6, size * 0.55);
      ctx.lineTo(-size * 0.6, -size * 0.55);
      ctx.closePath();
      ctx.fillStyle = "#f7768e";
      ctx.fill();
      ctx.restore();
    }
  }
}
