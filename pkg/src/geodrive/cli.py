"""Command-line front end: scripted runs, log summaries, live service.

``run`` executes in-process by default and prints one JSON summary object;
with ``--server`` it becomes a thin client that posts the same request to
a running service.  ``summarize`` re-reads a recorded log.  ``serve``
starts the interactive session service.
"""

from __future__ import annotations

import json
import urllib.request
from dataclasses import replace

import click

from .config import ConfigError, load_config
from .driver import ScriptedDriver
from .routes import make_route
from .simulation import run_closed_loop
from .telemetry import RunHeader, TelemetryError, read_log, write_log
from .telemetry import summarize as summarize_records
from .vehicle import VehicleParams

__all__ = ["main"]


@click.group()
def main() -> None:
    """Differential-drive simulator with an assist-as-needed controller."""


@main.command()
@click.option("--route", "route_kind", type=click.Choice(["figure8", "spiral"]),
              default="figure8", show_default=True, help="reference route")
@click.option("--scale", type=float, default=3.0, show_default=True,
              help="route size parameter (m)")
@click.option("--vmax", type=float, default=None, help="speed ceiling v_m override (m/s)")
@click.option("--n", type=int, default=None, help="reliance level override")
@click.option("--controller", type=click.Choice(["on", "off"]), default="on",
              show_default=True, help="off forces a pure manual (n=1) run")
@click.option("--seed", type=int, default=0, show_default=True, help="driver rng seed")
@click.option("--duration", type=float, default=30.0, show_default=True, help="run length (s)")
@click.option("--dt", type=float, default=0.02, show_default=True, help="tick period (s)")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="config file (JSON or key = value lines)")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="write the full run log here")
@click.option("--noise", type=float, default=0.25, show_default=True,
              help="driver joystick noise std-dev")
@click.option("--lookahead", type=float, default=1.2, show_default=True,
              help="driver lookahead distance (m)")
@click.option("--delay-ticks", type=int, default=6, show_default=True,
              help="driver reaction delay in ticks")
@click.option("--server", default=None, metavar="URL",
              help="post the run to a running service instead of executing locally")
def run(route_kind, scale, vmax, n, controller, seed, duration, dt, config_path,
        out, noise, lookahead, delay_ticks, server) -> None:
    """Run one scripted closed-loop simulation and print its summary."""
    controller_on = controller == "on"
    if server is not None:
        payload = {
            "route": route_kind, "scale": scale, "seed": seed, "duration": duration,
            "dt": dt, "controller_on": controller_on, "noise_std": noise,
            "lookahead": lookahead, "delay_ticks": delay_ticks,
        }
        if n is not None:
            payload["n"] = n
        if vmax is not None:
            payload["v_m"] = vmax
        request = urllib.request.Request(
            server.rstrip("/") + "/api/run",
            data=json.dumps(payload).encode("utf-8"),
            headers={"Content-Type": "application/json"},
            method="POST",
        )
        try:
            with urllib.request.urlopen(request) as response:
                body = json.load(response)
        except OSError as exc:
            raise click.ClickException(f"server request failed: {exc}") from exc
        click.echo(json.dumps(body["summary"]))
        return

    try:
        cfg, bounds = load_config(config_path, overrides={"v_m": vmax, "n": n})
        params = VehicleParams(v_max=cfg.v_m)
        route = make_route(route_kind, scale)
        driver = ScriptedDriver(
            lookahead=lookahead, delay_ticks=delay_ticks, noise_std=noise,
            seed=seed, target_speed=cfg.v_m, tick_dt=dt,
        )
        records = run_closed_loop(
            cfg, bounds, params, route, driver, duration, dt, controller_on=controller_on
        )
    except (ConfigError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc

    if out is not None:
        effective = cfg if controller_on else replace(cfg, n=1)
        header = RunHeader(
            route_kind=route.kind, route_scale=route.scale, seed=seed, dt=dt,
            controller=effective, bounds=bounds, vehicle=params,
        )
        write_log(header, records, out)

    summary = summarize_records(records, route, v_max=cfg.v_m)
    click.echo(json.dumps(summary.as_dict()))


@main.command(name="summarize")
@click.argument("log", type=click.Path(exists=True, dir_okay=False))
@click.option("--route", "route_kind", type=click.Choice(["figure8", "spiral"]),
              default=None, help="override the route stored in the log header")
@click.option("--scale", type=float, default=None, help="route scale override (m)")
def summarize_cmd(log, route_kind, scale) -> None:
    """Print metrics and monitor violation counts for a recorded log."""
    try:
        header, records = read_log(log)
        route = make_route(
            route_kind or header.route_kind,
            scale if scale is not None else header.route_scale,
        )
        summary = summarize_records(records, route, v_max=header.controller.v_m)
    except (TelemetryError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(json.dumps(summary.as_dict()))


@main.command()
@click.option("--bind", default="127.0.0.1:8000", show_default=True,
              metavar="ADDR:PORT", help="listen address")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="config file (JSON or key = value lines)")
@click.option("--route", "route_kind", type=click.Choice(["figure8", "spiral"]),
              default="figure8", show_default=True, help="initial route")
@click.option("--scale", type=float, default=3.0, show_default=True,
              help="route size parameter (m)")
@click.option("--dt", type=float, default=0.02, show_default=True, help="tick period (s)")
@click.option("--runs-dir", type=click.Path(file_okay=False), default="runs",
              show_default=True, help="directory for recorded session logs")
@click.option("--static", "static_dir", type=click.Path(file_okay=False), default=None,
              help="cockpit bundle directory to serve at /")
def serve(bind, config_path, route_kind, scale, dt, runs_dir, static_dir) -> None:
    """Serve the interactive driving session until terminated."""
    try:
        cfg, bounds = load_config(config_path)
    except ConfigError as exc:
        raise click.ClickException(str(exc)) from exc
    from .service import serve_forever

    try:
        serve_forever(
            bind, cfg=cfg, bounds=bounds, route_kind=route_kind, route_scale=scale,
            dt=dt, runs_dir=runs_dir, static_dir=static_dir,
        )
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
