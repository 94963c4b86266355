/**
 * Cockpit wiring: websocket consumer, render loop, and control panel.
 *
 * The network consumer and the render loop are decoupled: inbound state
 * frames land in a latest-wins slot and the requestAnimationFrame loop
 * draws whatever is newest, so a slow tab drops frames instead of lagging
 * ever further behind the simulation.
 */

import { GaugePanel } from "./gauges.js";
import { VirtualJoystick } from "./joystick.js";
import {
  joystickToMessage,
  parseInbound,
  isPassthrough,
  type OutboundMessage,
  type StateMessage,
  type TickRecord,
} from "./messages.js";
import { RunningMetrics } from "./metrics.js";
import { TraceView } from "./trace.js";

interface RoutePayload {
  kind: string;
  scale: number;
  closed: boolean;
  points: [number, number][];
}

function qs<T extends HTMLElement>(selector: string): T {
  const el = document.querySelector<T>(selector);
  if (!el) throw new Error(`missing element ${selector}`);
  return el;
}

function banner(text: string, tone: "error" | "info" = "error"): void {
  const el = qs<HTMLElement>("#banner");
  el.textContent = text;
  el.dataset.tone = tone;
  el.hidden = false;
  window.setTimeout(() => {
    if (el.textContent === text) el.hidden = true;
  }, 4000);
}

/** Exponentially smoothed events-per-second meter. */
class RateMeter {
  private last = 0;
  private ema = 0;

  tick(now: number): void {
    if (this.last > 0) {
      const inst = 1000 / Math.max(now - this.last, 1e-3);
      this.ema = this.ema === 0 ? inst : this.ema * 0.95 + inst * 0.05;
    }
    this.last = now;
  }

  get perSecond(): number {
    return this.ema;
  }
}

async function main(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const server = params.get("server") ?? window.location.host;
  const routeKind = params.get("route") ?? "figure8";
  const scheme = window.location.protocol === "https:" ? "wss" : "ws";

  const canvas = qs<HTMLCanvasElement>("#trace");
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("canvas 2d context unavailable");

  const trace = new TraceView();
  const panel = new GaugePanel(document);
  const fpsMeter = new RateMeter();
  const stateMeter = new RateMeter();

  let metrics = new RunningMetrics(3.0);
  let latest: StateMessage | null = null;
  let lastRenderedTick = -1;
  let passthroughArmedAt: number | null = null;

  // --- REST bootstrap -----------------------------------------------------

  async function loadRoute(kind: string, scale?: number): Promise<void> {
    const query = scale !== undefined ? `?scale=${scale}` : "";
    const resp = await fetch(`http://${server}/api/routes/${kind}${query}`);
    if (!resp.ok) throw new Error(`route fetch failed: ${resp.status}`);
    const route = (await resp.json()) as RoutePayload;
    trace.setRoute(route.points, route.closed, canvas.width, canvas.height);
    qs<HTMLSelectElement>("#route-select").value = route.kind;
  }

  try {
    const resp = await fetch(`http://${server}/api/config`);
    if (resp.ok) {
      const cfg = (await resp.json()) as {
        controller: { n: number; v_m: number };
        route: { kind: string; scale: number };
      };
      metrics = new RunningMetrics(cfg.controller.v_m);
      qs<HTMLInputElement>("#vmax-input").value = String(cfg.controller.v_m);
      updateReliancePanel(cfg.controller.n);
      await loadRoute(cfg.route.kind, cfg.route.scale);
    } else {
      await loadRoute(routeKind);
    }
  } catch (err) {
    banner(`service unreachable at ${server}: ${String(err)}`);
  }

  // --- websocket ----------------------------------------------------------

  const ws = new WebSocket(`${scheme}://${server}/ws`);
  const status = qs<HTMLElement>("#conn-status");

  function send(msg: OutboundMessage): void {
    if (ws.readyState === WebSocket.OPEN) ws.send(JSON.stringify(msg));
  }

  ws.addEventListener("open", () => {
    status.textContent = "connected";
    status.dataset.tone = "ok";
  });
  ws.addEventListener("close", () => {
    status.textContent = "disconnected";
    status.dataset.tone = "warn";
    banner("connection closed; reload to reconnect");
  });
  ws.addEventListener("message", (ev) => {
    const frame = parseInbound(String(ev.data));
    if (frame === null) {
      banner("malformed frame from server");
      return;
    }
    if (frame.type === "state") {
      stateMeter.tick(performance.now());
      latest = frame;
      metrics.push(frame.record);
      trace.appendPose(frame.record.pose);
      if (passthroughArmedAt !== null && isPassthrough(frame.record)) {
        const delay = frame.tick - passthroughArmedAt;
        qs<HTMLElement>("#passthrough-delay").textContent =
          `passthrough after ${delay} tick${delay === 1 ? "" : "s"}`;
        passthroughArmedAt = null;
      }
    } else if (frame.type === "config_ack") {
      const n = frame.config.n;
      const vM = frame.config.v_m;
      if (typeof n === "number") {
        updateReliancePanel(n);
        if (n === 1 && latest !== null) passthroughArmedAt = latest.tick;
      }
      if (typeof vM === "number") {
        metrics = new RunningMetrics(vM);
        qs<HTMLInputElement>("#vmax-input").value = String(vM);
      }
      banner("config applied", "info");
    } else {
      banner(`${frame.code}: ${frame.text}`);
    }
  });

  // --- input --------------------------------------------------------------

  new VirtualJoystick(qs<HTMLCanvasElement>("#joystick"), (sample) => {
    send(joystickToMessage(sample));
  });

  // --- panel --------------------------------------------------------------

  function updateReliancePanel(n: number): void {
    qs<HTMLElement>("#n-value").textContent = `n = ${n}`;
    for (const btn of document.querySelectorAll<HTMLButtonElement>("[data-n]")) {
      btn.classList.toggle("active", Number(btn.dataset.n) === n);
    }
    const toggle = qs<HTMLInputElement>("#controller-toggle");
    toggle.checked = n > 1;
  }

  for (const btn of document.querySelectorAll<HTMLButtonElement>("[data-n]")) {
    btn.addEventListener("click", () => {
      send({ type: "set_config", config: { n: Number(btn.dataset.n) } });
    });
  }

  qs<HTMLInputElement>("#controller-toggle").addEventListener("change", (ev) => {
    const on = (ev.target as HTMLInputElement).checked;
    const selected = document.querySelector<HTMLButtonElement>("[data-n].active");
    const n = on ? Math.max(Number(selected?.dataset.n ?? 3), 2) : 1;
    send({ type: "set_config", config: { n } });
  });

  qs<HTMLInputElement>("#vmax-input").addEventListener("change", (ev) => {
    const value = Number((ev.target as HTMLInputElement).value);
    if (Number.isFinite(value) && value > 0) {
      send({ type: "set_config", config: { v_m: value } });
    }
  });

  qs<HTMLButtonElement>("#reset-btn").addEventListener("click", () => {
    const kind = qs<HTMLSelectElement>("#route-select").value;
    send({ type: "reset", route: kind });
    trace.clearTrace();
    metrics.reset();
    void loadRoute(kind);
  });

  const recordBtn = qs<HTMLButtonElement>("#record-btn");
  let recording = false;
  recordBtn.addEventListener("click", () => {
    recording = !recording;
    send({ type: "record", on: recording });
    recordBtn.textContent = recording ? "stop recording" : "record";
    recordBtn.classList.toggle("active", recording);
  });

  // --- render loop --------------------------------------------------------

  const fpsEl = qs<HTMLElement>("#fps");
  const metricsEl = qs<HTMLElement>("#metrics");

  function frame(now: number): void {
    fpsMeter.tick(now);
    if (latest !== null && latest.tick !== lastRenderedTick) {
      lastRenderedTick = latest.tick;
      renderState(latest.record);
    }
    fpsEl.textContent =
      `${fpsMeter.perSecond.toFixed(0)} fps / ` +
      `${stateMeter.perSecond.toFixed(0)} state/s`;
    requestAnimationFrame(frame);
  }

  function renderState(record: TickRecord): void {
    trace.render(ctx!, canvas.width, canvas.height);
    panel.update(record);
    const snap = metrics.snapshot();
    metricsEl.textContent =
      `smoothness ${snap.smoothness.toFixed(1)} | ` +
      `effort ${snap.effortCycles} | ` +
      `violations v:${snap.violations.velocity} ` +
      `s:${snap.violations.steering} ` +
      `st:${snap.violations.stability} | ` +
      `degraded ${snap.degradedTicks}`;
  }

  requestAnimationFrame(frame);
}

main().catch((err) => {
  console.error(err);
  const el = document.querySelector<HTMLElement>("#banner");
  if (el) {
    el.textContent = String(err);
    el.hidden = false;
  }
});
