"""Shared frame/scenario factories for tests."""

from __future__ import annotations

import pytest

from rewardforge.sim import AgentState, Frame, Scenario, Status, WorkspaceConfig
from rewardforge.sim.kinematics import predict_humans


def build_cfg(**overrides) -> WorkspaceConfig:
    base = dict(human_count=0, randomize=False, seed=0)
    base.update(overrides)
    return WorkspaceConfig(**base)


def build_frame(
    cfg: WorkspaceConfig,
    robot_pos=(2.0, 6.0),
    robot_vel=(0.0, 0.0),
    goal=(10.0, 6.0),
    humans=(),
    t=0,
    status=Status.RUNNING,
) -> Frame:
    robot = AgentState(
        pos=robot_pos, vel=robot_vel, radius=cfg.robot_radius, goal=goal, pref_speed=cfg.v_max
    )
    humans = tuple(humans)
    visible = tuple(
        h
        for h in humans
        if ((h.pos[0] - robot_pos[0]) ** 2 + (h.pos[1] - robot_pos[1]) ** 2) ** 0.5
        <= cfg.sense_range
    )
    return Frame(
        t=t,
        robot=robot,
        humans=visible,
        all_humans=humans,
        predicted=predict_humans(visible, cfg.prediction_steps, cfg.dt),
        status=status,
    )


def build_human(pos, vel=(0.0, 0.0), radius=0.4, goal=(0.0, 0.0), pref_speed=1.0) -> AgentState:
    return AgentState(pos=pos, vel=vel, radius=radius, goal=goal, pref_speed=pref_speed)


def build_scenario(start=(2.0, 6.0), goal=(10.0, 6.0), humans=(), sid="test") -> Scenario:
    return Scenario(id=sid, robot_start=start, robot_goal=goal, human_inits=tuple(humans))


@pytest.fixture
def cfg() -> WorkspaceConfig:
    return build_cfg()
