"""Scenario sampling: circle-crossing placement with optional trait randomization."""

from __future__ import annotations

import math

import numpy as np

from .. import geometry as geo
from ..geometry import Vec2
from ..rng import substream
from .types import AgentState, GoalSwitch, Scenario, WorkspaceConfig

_CIRCLE_RADIUS = 4.0
_MAX_REJECTIONS = 1000
_PLACEMENT_MARGIN = 1e-6


class ScenarioGenerationError(Exception):
    pass


def _on_circle(center: Vec2, angle: float) -> Vec2:
    return (center[0] + _CIRCLE_RADIUS * math.cos(angle), center[1] + _CIRCLE_RADIUS * math.sin(angle))


def generate_scenario(
    cfg: WorkspaceConfig, rng: np.random.Generator, scenario_id: str = "scenario"
) -> Scenario:
    """Sample one crossing scenario.

    Robot start/goal sit antipodally on a circle centered in the
    workspace, humans on the same circle with goals near their
    antipodes; placements are rejection-sampled so that no two agents
    start overlapping.  With ``cfg.randomize`` human traits are drawn
    uniformly from the configured ranges and each human may switch to
    a fresh goal once mid-episode.
    """
    cfg.validate()
    center = (cfg.width / 2.0, cfg.height / 2.0)

    robot_angle = float(rng.uniform(-math.pi, math.pi))
    robot_start = _on_circle(center, robot_angle)
    goal_jitter = float(rng.uniform(-0.3, 0.3))
    robot_goal = _on_circle(center, robot_angle + math.pi + goal_jitter)

    if cfg.randomize:
        speeds = [float(rng.uniform(*cfg.human_vmax_range)) for _ in range(cfg.human_count)]
        radii = [float(rng.uniform(*cfg.human_radius_range)) for _ in range(cfg.human_count)]
    else:
        mid_speed = sum(cfg.human_vmax_range) / 2.0
        mid_radius = sum(cfg.human_radius_range) / 2.0
        speeds = [mid_speed] * cfg.human_count
        radii = [mid_radius] * cfg.human_count

    humans: list[AgentState] = []
    rejections = 0
    for i in range(cfg.human_count):
        while True:
            angle = float(rng.uniform(-math.pi, math.pi))
            pos = _on_circle(center, angle)
            clear = geo.dist(pos, robot_start) > radii[i] + cfg.robot_radius + _PLACEMENT_MARGIN
            for j, placed in enumerate(humans):
                if geo.dist(pos, placed.pos) <= radii[i] + radii[j] + _PLACEMENT_MARGIN:
                    clear = False
                    break
            if clear:
                goal = _on_circle(center, angle + math.pi + float(rng.uniform(-0.3, 0.3)))
                humans.append(
                    AgentState(pos=pos, vel=(0.0, 0.0), radius=radii[i], goal=goal, pref_speed=speeds[i])
                )
                break
            rejections += 1
            if rejections >= _MAX_REJECTIONS:
                raise ScenarioGenerationError(
                    f"placement failed after {_MAX_REJECTIONS} rejections (seed material: {scenario_id})"
                )

    switches: list[GoalSwitch] = []
    if cfg.randomize:
        lo = int(0.25 * cfg.horizon)
        hi = int(0.75 * cfg.horizon)
        for i in range(cfg.human_count):
            if float(rng.uniform(0.0, 1.0)) < 0.5:
                step = int(rng.integers(lo, hi + 1))
                new_goal = _on_circle(center, float(rng.uniform(-math.pi, math.pi)))
                switches.append(GoalSwitch(human_index=i, step=step, new_goal=new_goal))

    return Scenario(
        id=scenario_id,
        robot_start=robot_start,
        robot_goal=robot_goal,
        human_inits=tuple(humans),
        goal_switches=tuple(switches),
        randomization_log={
            "randomize": cfg.randomize,
            "speeds": speeds,
            "radii": radii,
            "rejections": rejections,
        },
    )


def scenario_for_index(cfg: WorkspaceConfig, run_seed: int, index: int, tag: str = "scenario") -> Scenario:
    """Deterministic scenario from a named stream keyed by (seed, tag, index)."""
    rng = substream(run_seed, tag, index)
    return generate_scenario(cfg, rng, scenario_id=f"{tag}-{index:05d}")
