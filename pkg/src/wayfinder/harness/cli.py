"""Command line interface."""

from __future__ import annotations

import json
from pathlib import Path

import click

from .config import TrialConfig
from .events import read_log
from .export import export_artifacts
from .metrics import compute_metrics
from .runner import run_trial


def _parse_params(params: tuple[str, ...]) -> dict[str, str]:
    out = {}
    for item in params:
        key, sep, value = item.partition("=")
        if not sep:
            raise click.BadParameter(f"expected k=v, got {item!r}")
        out[key] = value
    return out


@click.group()
def main():
    """Deterministic room-finding trials in simulated buildings."""


@main.command()
@click.option("--floorplan", "-f", required=True,
              help="Floor-plan file or bundled fixture name.")
@click.option("--goal", "-g", required=True, help="Goal door tag.")
@click.option("--seed", "-s", required=True, type=int)
@click.option("--script", type=click.Path(exists=True),
              help="Scripted giver responses (JSON).")
@click.option("--oracle", is_flag=True,
              help="Answer queries from floor-plan annotations.")
@click.option("--wrong-turns", type=int, default=0,
              help="Turns to corrupt in the oracle's first directions.")
@click.option("--interactive", is_flag=True, help="Serve a live session.")
@click.option("--port", type=int, default=0)
@click.option("--wait-for-human", is_flag=True,
              help="Freeze sim time while awaiting replies.")
@click.option("--param", "-p", multiple=True, help="Config override k=v.")
@click.option("--out", "-o", type=click.Path(), default=None,
              help="Directory for exported artifacts.")
def run(floorplan, goal, seed, script, oracle, wrong_turns, interactive,
        port, wait_for_human, param, out):
    """Run one seeded trial."""
    if sum(map(bool, (script, oracle, interactive))) != 1:
        raise click.UsageError(
            "pick exactly one of --script, --oracle, --interactive")
    giver = "scripted" if script else "oracle" if oracle else "interactive"
    config = TrialConfig(floorplan=floorplan, goal_tag=goal, seed=seed,
                         giver=giver, script=script, wrong_turns=wrong_turns,
                         params=_parse_params(param),
                         wait_for_human=wait_for_human)
    if interactive:
        from .session import serve_session

        server = serve_session(config, port)
        click.echo(f"session listening on 127.0.0.1:{server.port}")
        record = server.serve_one()
    else:
        record = run_trial(config)
    click.echo(f"outcome: {record.outcome}"
               + (f" ({record.failure_reason})" if record.failure_reason
                  else ""))
    click.echo(f"sim seconds: {record.sim_seconds:.1f}")
    click.echo(f"event digest: {record.digest}")
    if out:
        paths = export_artifacts(record, out)
        for name, path in paths.items():
            click.echo(f"wrote {name}: {path}")


@main.command()
@click.option("--manifest", "-m", required=True, type=click.Path(exists=True),
              help="JSON list of trial configurations.")
@click.option("--out", "-o", required=True, type=click.Path())
def batch(manifest, out):
    """Run every trial in a manifest and write records plus a summary."""
    configs = [TrialConfig.from_dict(d)
               for d in json.loads(Path(manifest).read_text())]
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = []
    for i, config in enumerate(configs):
        record = run_trial(config)
        records.append(record)
        slot = out_dir / f"trial_{i:03d}"
        export_artifacts(record, slot)
        click.echo(f"[{i + 1}/{len(configs)}] {config.floorplan} "
                   f"goal={config.goal_tag} seed={config.seed}: "
                   f"{record.outcome}")
    summary = compute_metrics(records)
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2))
    click.echo(f"success rate: {summary['success_rate']:.1%}")


@main.command()
@click.option("--in", "in_dir", required=True, type=click.Path(exists=True))
def metrics(in_dir):
    """Summarize a directory of exported trials."""
    root = Path(in_dir)
    summaries = sorted(root.glob("trial_*/metrics.json"))
    if not summaries:
        raise click.UsageError(f"no trial metrics under {in_dir}")
    totals = {"trials": 0, "successes": 0}
    for path in summaries:
        data = json.loads(path.read_text())
        totals["trials"] += data.get("trials", 1)
        totals["successes"] += data.get("successes",
                                        1 if data.get("outcome") == "success"
                                        else 0)
    totals["success_rate"] = totals["successes"] / totals["trials"]
    click.echo(json.dumps(totals, indent=2))


@main.command("export-map")
@click.option("--record", "-r", required=True, type=click.Path(exists=True),
              help="events.jsonl of a finished trial.")
@click.option("--out", "-o", required=True, type=click.Path())
def export_map(record, out):
    """Rebuild the SVG map from a stored event log."""
    from .export import _svg_map
    from .runner import load_plan

    records = read_log(record)
    config_rec = next(r for r in records if r["kind"] == "config")
    config = TrialConfig.from_dict(config_rec["payload"])
    plan = load_plan(config.floorplan)
    path = [(r["payload"]["x"], r["payload"]["y"])
            for r in records if r["kind"] == "pose"]

    class _Shim:
        pass

    shim = _Shim()
    shim.path = path
    shim.qmap_export = {"vertices": [
        {"location": r["payload"]["location"], "type": r["payload"]["type"],
         "hallways": []}
        for r in records if r["kind"] == "intersection"]}
    Path(out).write_text(_svg_map(shim, plan), encoding="utf-8")
    click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
