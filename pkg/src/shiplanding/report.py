"""Episode artifacts: CSV time series, JSON summaries, and SVG plots."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .control import LANDING_THRESHOLD
from .deck_motion import DECK_SIZE
from .errors import IoFailure
from .sim import EpisodeLog, MonteCarloSummary

CSV_COLUMNS = [
    "t", "mode",
    "cmd_pitch", "cmd_roll", "cmd_heave", "cmd_yaw",
    "veh_x", "veh_y", "veh_z", "veh_heading",
    "ship_x", "ship_y", "ship_heading",
    "deck_roll", "deck_pitch", "deck_heave",
    "est_x", "est_y", "est_z", "est_yaw",
]


def write_episode_csv(log: EpisodeLog, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for i in range(len(log.t)):
            writer.writerow([
                f"{log.t[i]:.3f}", log.mode[i],
                *(f"{v:.4f}" for v in log.commands[i]),
                *(f"{v:.4f}" for v in log.vehicle[i]),
                *(f"{v:.4f}" for v in log.ship[i]),
                *(f"{v:.4f}" for v in log.deck[i]),
                *(f"{v:.4f}" for v in log.estimate[i]),
            ])


def episode_summary(log: EpisodeLog) -> dict:
    return {
        "seed": log.seed,
        "terminal": log.terminal,
        "landed_time": log.landed_time,
        "touchdown_offset": list(log.touchdown_offset) if log.touchdown_offset else None,
        "touchdown_radius": log.touchdown_radius,
        "touchdown_deck_attitude": (list(log.touchdown_deck_attitude)
                                    if log.touchdown_deck_attitude else None),
        "mode_transitions": [list(tr) for tr in log.mode_transitions],
        "duration": float(log.t[-1]) if len(log.t) else 0.0,
    }


def _plot_trajectory(logs, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(7, 6))
    for log in logs:
        ax.plot(log.vehicle[:, 0], log.vehicle[:, 1], lw=0.9)
    for log in logs[:1]:
        ax.plot(log.ship[:, 0], log.ship[:, 1], "k--", lw=1.2, label="ship track")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_title("Plan-view trajectories")
    ax.axis("equal")
    ax.legend(loc="best")
    fig.savefig(path, format="svg")
    plt.close(fig)


def _plot_timeseries(log: EpisodeLog, path: Path) -> None:
    fig, axes = plt.subplots(3, 1, figsize=(8, 9), sharex=True)
    labels = ("pitch", "roll", "heave", "yaw")
    for j, lab in enumerate(labels):
        axes[0].plot(log.t, log.commands[:, j], lw=0.8, label=lab)
    axes[0].set_ylabel("command [%]")
    axes[0].legend(loc="best", ncol=4)
    dist = np.hypot(log.vehicle[:, 0] - log.ship[:, 0], log.vehicle[:, 1] - log.ship[:, 1])
    axes[1].plot(log.t, dist, lw=1.0)
    axes[1].set_ylabel("distance to ship [m]")
    axes[2].plot(log.t, log.vehicle[:, 3], lw=1.0, label="vehicle")
    axes[2].plot(log.t, log.ship[:, 2], lw=1.0, label="ship")
    axes[2].set_ylabel("heading [deg]")
    axes[2].set_xlabel("t [s]")
    axes[2].legend(loc="best")
    fig.savefig(path, format="svg")
    plt.close(fig)


def _plot_scatter(logs, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 6))
    half = DECK_SIZE / 2.0
    ax.add_patch(plt.Rectangle((-half, -half), DECK_SIZE, DECK_SIZE,
                               fill=False, ec="grey", label="deck"))
    thr = LANDING_THRESHOLD
    ax.add_patch(plt.Rectangle((-thr, -thr), 2 * thr, 2 * thr,
                               fill=False, ec="green", ls="--", label="threshold"))
    pts = [log.touchdown_offset for log in logs if log.touchdown_offset is not None]
    if pts:
        arr = np.array(pts)
        ax.scatter(arr[:, 0], arr[:, 1], s=18, c="tab:blue")
    ax.set_xlabel("along-ship offset [m]")
    ax.set_ylabel("cross-ship offset [m]")
    ax.set_title("Touchdown scatter")
    ax.axis("equal")
    lim = half * 1.3
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.legend(loc="upper right")
    fig.savefig(path, format="svg")
    plt.close(fig)


def emit_report(logs, out_dir, summary: MonteCarloSummary | None = None) -> dict:
    """Write CSVs, a JSON summary, and three SVG plots for the given logs."""
    logs = list(logs)
    if not logs:
        raise IoFailure("no episode logs to report on")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, log in enumerate(logs):
        write_episode_csv(log, out / f"episode_{i:03d}.csv")
    payload = {"episodes": [episode_summary(log) for log in logs]}
    if summary is not None:
        payload["monte_carlo"] = {
            "n": summary.n,
            "landed": summary.landed,
            "success_rate": summary.success_rate,
            "within_threshold": summary.within_threshold,
            "offset_percentiles": summary.offset_percentiles,
            "deck_roll_range": list(summary.deck_roll_range),
            "deck_pitch_range": list(summary.deck_pitch_range),
            "terminals": list(summary.terminals),
        }
    else:
        landed = [log for log in logs if log.landed]
        payload["landed"] = len(landed)
        payload["success_rate"] = len(landed) / len(logs)
    with open(out / "summary.json", "w") as fh:
        json.dump(payload, fh, indent=2)
    _plot_trajectory(logs, out / "trajectory.svg")
    _plot_timeseries(logs[0], out / "timeseries.svg")
    _plot_scatter(logs, out / "scatter.svg")
    return payload


def load_summary(in_dir) -> dict:
    path = Path(in_dir) / "summary.json"
    if not path.exists():
        raise IoFailure(f"no summary.json in {in_dir}")
    with open(path) as fh:
        return json.load(fh)


def print_report(in_dir) -> str:
    """Render the stored summary as a human-readable text block."""
    data = load_summary(in_dir)
    lines = [f"report: {in_dir}"]
    mc = data.get("monte_carlo")
    if mc:
        lines.append(f"episodes: {mc['n']}  landed: {mc['landed']}  "
                     f"success rate: {mc['success_rate']:.2%}")
        lines.append(f"within threshold: {mc['within_threshold']}")
        if mc["offset_percentiles"]:
            pcts = "  ".join(f"p{k}={v:.3f} m" for k, v in mc["offset_percentiles"].items())
            lines.append(f"touchdown radius: {pcts}")
        lines.append(f"deck roll at touchdown: [{mc['deck_roll_range'][0]:.2f}, "
                     f"{mc['deck_roll_range'][1]:.2f}] deg")
        lines.append(f"deck pitch at touchdown: [{mc['deck_pitch_range'][0]:.2f}, "
                     f"{mc['deck_pitch_range'][1]:.2f}] deg")
    for i, ep in enumerate(data.get("episodes", [])):
        off = ep["touchdown_offset"]
        off_txt = (f"offset=({off[0]:+.3f}, {off[1]:+.3f}) m" if off else "no touchdown")
        lines.append(f"episode {i}: {ep['terminal']}  t={ep['duration']:.1f} s  {off_txt}")
    return "\n".join(lines)
