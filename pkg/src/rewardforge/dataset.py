"""Screening dataset: scenarios with behaviorally diverse robot trajectories.

Each scenario carries a fixed number of episodes rolled by a cycled
controller roster (goal-seeking, reactive, noisy, random, idle, and
detouring behaviors), giving the per-frame rules ranking something to
discriminate.  The dataset is immutable after build and serializes to
a manifest plus line-delimited scenario and episode files.
"""

from __future__ import annotations

import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import geometry as geo
from .rng import substream
from .sim import Episode, Scenario, Status, WorkspaceConfig, run_episode
from .sim.controllers import roster as controller_roster
from .sim.scenario import generate_scenario
from .sim.serialize import (
    EPISODE_SCHEMA,
    SCENARIO_SCHEMA,
    episode_from_dict,
    episode_to_dict,
    read_records,
    scenario_from_dict,
    scenario_to_dict,
    write_records,
)

MAX_RANK_FRAMES = 200
_DIVERSITY_FRACTION = 0.8
_MAX_BUILD_ATTEMPTS = 5


@dataclass(frozen=True)
class TrajectoryDataset:
    scenarios: tuple[tuple[Scenario, tuple[Episode, ...]], ...]
    cfg: WorkspaceConfig
    manifest: dict = field(default_factory=dict)

    @property
    def n_traj(self) -> int:
        return len(self.scenarios[0][1]) if self.scenarios else 0

    def frames_for(self, index: int) -> int:
        """Number of rankable frames for scenario ``index`` (capped)."""
        _, episodes = self.scenarios[index]
        return min(max(len(e.frames) for e in episodes), MAX_RANK_FRAMES, self.cfg.horizon)

    def content_hash(self) -> str:
        buf = io.StringIO()
        write_records(buf, SCENARIO_SCHEMA, (scenario_to_dict(s) for s, _ in self.scenarios))
        for _, episodes in self.scenarios:
            write_records(buf, EPISODE_SCHEMA, (episode_to_dict(e) for e in episodes))
        return hashlib.sha256(buf.getvalue().encode("utf-8")).hexdigest()


def _episode_labels(episodes) -> tuple[bool, bool]:
    succeeded = any(e.outcome is Status.SUCCESS for e in episodes)
    collided = any(e.outcome is Status.COLLISION for e in episodes)
    return succeeded, collided


def _build_once(
    cfg: WorkspaceConfig, n_scenarios: int, n_traj: int, run_seed: int, attempt: int
) -> TrajectoryDataset:
    scenarios = []
    controllers_used: list[list[str]] = []
    for j in range(n_scenarios):
        scenario = generate_scenario(
            cfg,
            substream(run_seed, "dataset", attempt, "scenario", j),
            scenario_id=f"scenario-{attempt}-{j:05d}",
        )
        episodes = []
        names = []
        entries = controller_roster(
            cfg, lambda name, _j=j: substream(run_seed, "dataset", attempt, "ctrl", _j, name)
        )
        for k in range(n_traj):
            name, factory = entries[k % len(entries)]
            episodes.append(run_episode(scenario, factory(), cfg))
            names.append(name)
        scenarios.append((scenario, tuple(episodes)))
        controllers_used.append(names)
    manifest = {
        "schema": "rewardforge.dataset.v1",
        "scenarios": n_scenarios,
        "trajectories": n_traj,
        "seed": run_seed,
        "attempt": attempt,
        "controllers": controllers_used,
        "cfg_digest": hashlib.sha256(repr(cfg).encode()).hexdigest()[:16],
    }
    return TrajectoryDataset(scenarios=tuple(scenarios), cfg=cfg, manifest=manifest)


def build_dataset(
    cfg: WorkspaceConfig, n_scenarios: int, n_traj: int, run_seed: int
) -> TrajectoryDataset:
    """Build the screening dataset, reseeding if outcome diversity is poor.

    A build is accepted when at least 80% of scenarios contain both a
    success-labeled and a collision-labeled episode; otherwise it is
    regenerated from the next attempt stream and the retry is recorded
    in the manifest.
    """
    if n_scenarios < 2 or n_traj < 2:
        raise ValueError("need at least 2 scenarios and 2 trajectories")
    cfg.validate()
    last = None
    for attempt in range(_MAX_BUILD_ATTEMPTS):
        ds = _build_once(cfg, n_scenarios, n_traj, run_seed, attempt)
        ok = sum(1 for _, eps in ds.scenarios if all(_episode_labels(eps)))
        diversity = ok / n_scenarios
        ds.manifest["outcome_diversity"] = diversity
        if diversity >= _DIVERSITY_FRACTION or cfg.human_count == 0:
            return ds
        last = ds
    last.manifest["diversity_warning"] = (
        f"diversity below {_DIVERSITY_FRACTION} after {_MAX_BUILD_ATTEMPTS} attempts"
    )
    return last


# --- rules-based per-frame ranking ---------------------------------------


def average_ranks(keys: list, descending: bool = True) -> list[float]:
    """Rank positions 1..n (1 = best) with average ranks on exact key ties."""
    n = len(keys)
    order = sorted(range(n), key=lambda i: keys[i], reverse=descending)
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and keys[order[j + 1]] == keys[order[i]]:
            j += 1
        mean_rank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def trajectory_key(scenario: Scenario, episode: Episode, f: int) -> tuple:
    """Lexicographic quality key at frame f; larger is better.

    Class first (succeeded > still running > collided, judging only
    events at steps <= f), then earlier success, larger progress, or
    later collision within the class.
    """
    if episode.success_step is not None and episode.success_step <= f:
        return (2, -episode.success_step)
    if episode.collision_step is not None and episode.collision_step <= f:
        return (0, episode.collision_step)
    return (1, episode.progress_at(f, scenario.robot_goal))


def rules_rank(scenario: Scenario, episodes, f: int) -> list[float]:
    """Per-frame rules ranking: success over progress over collision."""
    keys = [trajectory_key(scenario, e, f) for e in episodes]
    return average_ranks(keys, descending=True)


# --- persistence -----------------------------------------------------------


def save_dataset(ds: TrajectoryDataset, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "scenarios.jsonl", "w") as fh:
        write_records(fh, SCENARIO_SCHEMA, (scenario_to_dict(s) for s, _ in ds.scenarios))
    with open(out / "episodes.jsonl", "w") as fh:
        records = (
            {"scenario_index": j, "episode": episode_to_dict(e)}
            for j, (_, episodes) in enumerate(ds.scenarios)
            for e in episodes
        )
        write_records(fh, EPISODE_SCHEMA, records)
    manifest = dict(ds.manifest)
    manifest["content_hash"] = ds.content_hash()
    manifest["workspace"] = _cfg_to_dict(ds.cfg)
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
    return out


def load_dataset(in_dir: str | Path) -> TrajectoryDataset:
    src = Path(in_dir)
    with open(src / "manifest.json") as fh:
        manifest = json.load(fh)
    cfg = WorkspaceConfig(**manifest["workspace"])
    with open(src / "scenarios.jsonl") as fh:
        scenarios = [scenario_from_dict(d) for d in read_records(fh, SCENARIO_SCHEMA)]
    grouped: list[list[Episode]] = [[] for _ in scenarios]
    with open(src / "episodes.jsonl") as fh:
        for record in read_records(fh, EPISODE_SCHEMA):
            grouped[record["scenario_index"]].append(
                episode_from_dict(record["episode"], cfg.prediction_steps, cfg.dt)
            )
    return TrajectoryDataset(
        scenarios=tuple((s, tuple(eps)) for s, eps in zip(scenarios, grouped)),
        cfg=cfg,
        manifest=manifest,
    )


def _cfg_to_dict(cfg: WorkspaceConfig) -> dict:
    return {
        "width": cfg.width,
        "height": cfg.height,
        "dt": cfg.dt,
        "horizon": cfg.horizon,
        "v_max": cfg.v_max,
        "robot_radius": cfg.robot_radius,
        "goal_tolerance": cfg.goal_tolerance,
        "sense_range": cfg.sense_range,
        "gamma": cfg.gamma,
        "human_count": cfg.human_count,
        "randomize": cfg.randomize,
        "human_vmax_range": list(cfg.human_vmax_range),
        "human_radius_range": list(cfg.human_radius_range),
        "prediction_steps": cfg.prediction_steps,
        "seed": cfg.seed,
    }
