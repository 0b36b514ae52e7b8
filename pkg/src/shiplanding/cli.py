"""Command-line entry points: simulate, montecarlo, demo, report."""

from __future__ import annotations

import json
from pathlib import Path

import click

from .config import EpisodeConfig
from .report import emit_report, print_report
from .scenarios import SCENARIOS, build_scenario
from .sim import run_episode, run_monte_carlo


@click.group()
def main():
    """Deterministic simulator for vision-based autonomous ship landing."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True),
              help="Episode configuration JSON.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Output directory.")
def simulate(config_path, seed, out_dir):
    """Run a single episode and write its report."""
    cfg = EpisodeConfig.from_file(config_path).with_seed(seed)
    log = run_episode(cfg)
    emit_report([log], out_dir)
    click.echo(f"terminal: {log.terminal}")
    if log.touchdown_offset is not None:
        click.echo(f"touchdown offset: ({log.touchdown_offset[0]:+.3f}, "
                   f"{log.touchdown_offset[1]:+.3f}) m at t={log.landed_time:.1f} s")
    click.echo(f"report written to {out_dir}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True),
              help="Episode configuration JSON used as the template.")
@click.option("-n", "count", required=True, type=int, help="Number of episodes.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Output directory.")
def montecarlo(config_path, count, seed, out_dir):
    """Run a randomized batch of episodes and summarize the landings."""
    cfg = EpisodeConfig.from_file(config_path).with_seed(seed)
    summary = run_monte_carlo(cfg, count)
    emit_report(summary.logs, out_dir, summary=summary)
    click.echo(f"landed {summary.landed}/{summary.n} "
               f"({summary.success_rate:.0%}), "
               f"{summary.within_threshold} within the 0.35 m box")
    click.echo(f"report written to {out_dir}")


@main.command()
@click.option("--scenario", required=True, type=click.Choice(SCENARIOS))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_dir", default=None, type=click.Path(),
              help="Optional output directory for the report.")
def demo(scenario, seed, out_dir):
    """Run a named demonstration scenario."""
    cfg = build_scenario(scenario, seed=seed)
    log = run_episode(cfg)
    click.echo(f"scenario {scenario}: {log.terminal} after {log.t[-1]:.1f} s")
    for t, a, b in log.mode_transitions:
        click.echo(f"  t={t:7.2f} s  mode {a} -> {b}")
    if log.touchdown_offset is not None:
        click.echo(f"  touchdown offset ({log.touchdown_offset[0]:+.3f}, "
                   f"{log.touchdown_offset[1]:+.3f}) m")
    if out_dir:
        emit_report([log], out_dir)
        click.echo(f"report written to {out_dir}")


@main.command()
@click.option("--in", "in_dir", required=True, type=click.Path(exists=True),
              help="Directory previously written by simulate or montecarlo.")
def report(in_dir):
    """Print the stored summary of a previous run."""
    click.echo(print_report(in_dir))


@main.command("write-config")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--scenario", default="natops", show_default=True,
              type=click.Choice(SCENARIOS))
def write_config(out_path, scenario):
    """Write a scenario's configuration to a JSON file for editing."""
    cfg = build_scenario(scenario)
    Path(out_path).write_text(json.dumps(cfg.to_dict(), indent=2))
    click.echo(f"wrote {out_path}")


if __name__ == "__main__":
    main()
