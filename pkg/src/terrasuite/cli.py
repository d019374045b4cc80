"""Command-line harness: catalog listing, rollouts, terrain tooling,
validation batteries, frame export and the HTTP service.

Exit codes: 0 success, 1 validation failure, 2 input error, 3 I/O error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .character.model import CharacterError
from .envs.catalog import CatalogMissError, catalog_entry, list_envs, make_env
from .envs.config import ClipError
from .policies import POLICY_KINDS
from .terrain.generator import generate_terrain, terrain_stats, stats_to_csv
from .terrain.params import TerrainParamsError, parse_terrain_params

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INPUT = 2
EXIT_IO = 3


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
@click.version_option(__version__)
def main():
    """Planar terrain-locomotion environment suite."""


@main.command("list")
@click.option("--filter", "filter_", default=None, help="substring to match against names")
@click.option("--json", "as_json", is_flag=True, help="emit the full catalog as JSON")
def cmd_list(filter_, as_json):
    """List catalog environments (name, obs_dim, act_dim)."""
    entries = list_envs(filter_)
    if as_json:
        doc = [{"name": e.name, "obs_dim": e.obs_dim, "act_dim": e.act_dim,
                "description": e.description, "config": e.make_config().describe()}
               for e in entries]
        click.echo(json.dumps(doc, indent=2, sort_keys=True))
        return
    for e in entries:
        click.echo(f"{e.name:48s} obs={e.obs_dim:4d} act={e.act_dim:3d}  {e.description}")
    click.echo(f"# of envs: {len(entries)}", err=False)


@main.command("rollout")
@click.argument("env_name")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--steps", default=100, show_default=True, type=int)
@click.option("--policy", default="random", show_default=True,
              type=click.Choice(POLICY_KINDS))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def cmd_rollout(env_name, seed, steps, policy, out):
    """Run a seeded policy rollout and write a trajectory file."""
    from .trajectory import write_trajectory

    try:
        catalog_entry(env_name)
    except CatalogMissError as exc:
        _fail(EXIT_INPUT, str(exc))
    try:
        summary = write_trajectory(out, env_name, seed, steps, policy)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write {out}: {exc}")
    click.echo(f"wrote {summary.steps} records to {out}")
    click.echo(f"total reward {summary.total_reward:.4f}  "
               f"episodes completed {summary.episodes_completed}  "
               f"steps/s {summary.steps_per_s:.0f}")


@main.command("terrain")
@click.argument("params_path", type=click.Path(exists=False))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--length", default=80.0, show_default=True, type=float,
              help="generated extent beyond x=0, metres")
@click.option("--out", required=True, type=click.Path(dir_okay=False),
              help="profile CSV (vertices + feature annotations)")
@click.option("--svg", default=None, type=click.Path(dir_okay=False),
              help="optional SVG overview of the height polyline")
def cmd_terrain(params_path, seed, length, out, svg):
    """Generate terrain from a parameter file; print stats CSV to stdout."""
    path = Path(params_path)
    if not path.exists():
        _fail(EXIT_INPUT, f"no such terrain file: {params_path}")
    try:
        params = parse_terrain_params(path.read_text())
    except TerrainParamsError as exc:
        _fail(EXIT_INPUT, str(exc))
    profile = generate_terrain(params, seed, -10.0, length)
    try:
        with open(out, "w") as fh:
            fh.write("row,kind,x,y,width,magnitude\n")
            for x, y in zip(profile.xs, profile.ys):
                fh.write(f"vertex,,{float(x)!r},{float(y)!r},,\n")
            for f in profile.features:
                fh.write(f"feature,{f.kind},{f.start_x!r},,{f.width!r},{f.magnitude!r}\n")
        if svg:
            from .render_svg import profile_to_svg

            Path(svg).write_text(profile_to_svg(profile))
    except OSError as exc:
        _fail(EXIT_IO, f"cannot write output: {exc}")
    click.echo(stats_to_csv(terrain_stats(profile)), nl=False)


@main.command("validate")
@click.argument("scope", default="all")
def cmd_validate(scope):
    """Run invariant batteries: SCOPE is "all", an env name, or a terrain
    parameter file path."""
    from .validate import run_validation

    try:
        results = run_validation(scope)
    except CatalogMissError as exc:
        _fail(EXIT_INPUT, str(exc))
    failures = 0
    for r in results:
        status = "pass" if r.passed else "fail"
        if not r.passed:
            failures += 1
        click.echo(json.dumps({"check": r.name, "status": status, "detail": r.detail},
                              sort_keys=True))
    click.echo(json.dumps({"summary": {"checks": len(results), "failures": failures}},
                          sort_keys=True))
    sys.exit(EXIT_OK if failures == 0 else EXIT_VALIDATION)


@main.command("render")
@click.argument("traj", type=click.Path(exists=True, dir_okay=False))
@click.option("--env", "env_name", default=None,
              help="expected env name; must match the trajectory header")
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--every", default=10, show_default=True, type=int)
def cmd_render(traj, env_name, out_dir, every):
    """Replay a trajectory deterministically and write SVG frames."""
    from .render_svg import render_frame
    from .trajectory import TrajectoryFormatError, read_trajectory

    try:
        header, records = read_trajectory(traj)
    except (TrajectoryFormatError, json.JSONDecodeError) as exc:
        _fail(EXIT_INPUT, str(exc))
    if env_name is not None and env_name != header["env"]:
        _fail(EXIT_INPUT,
              f"trajectory was recorded on {header['env']!r}, not {env_name!r}")
    if every <= 0:
        _fail(EXIT_INPUT, "--every must be > 0")

    try:
        env = make_env(header["env"])
    except CatalogMissError as exc:
        _fail(EXIT_INPUT, str(exc))
    env.set_random_seed(header["seed"])
    env.reset()

    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        _fail(EXIT_IO, str(exc))

    frames = 0
    for i, rec in enumerate(records):
        if i % every == 0:
            svg = render_frame(env.terrain, env.model, env.state, i)
            (out / f"frame_{i:06d}.svg").write_text(svg)
            frames += 1
        result = env.step(rec.action)
        if result.reward != rec.reward or result.done != rec.done:
            _fail(EXIT_INPUT,
                  f"trajectory does not replay on {header['env']} (step {i}); "
                  "env/seed mismatch or stale file")
        if result.done:
            env.reset()
    click.echo(f"wrote {frames} frames to {out_dir}")


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8800, show_default=True, type=int)
def cmd_serve(host, port):
    """Run the HTTP service (FastAPI over uvicorn)."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
