"""Discrete-time environment loop and episode collection.

Humans follow the reciprocal-avoidance controller and react to each
other but never to the robot; humans outside sensing range are hidden
from the policy's view of a frame yet stay simulated and collision
checked.  Everything is a pure function of the scenario, the policy,
and the config, so equal seeds reproduce episodes bit for bit.
"""

from __future__ import annotations

from typing import Callable

from .. import geometry as geo
from ..geometry import Vec2
from .kinematics import MalformedActionError, classify_frame, predict_humans, step_robot
from .orca import OrcaParams, orca_velocity
from .types import AgentState, Episode, Frame, Scenario, Status, WorkspaceConfig

Policy = Callable[[Frame], Vec2]
# Per-frame reward hook: (frame, robot position prefix up to this frame) -> reward.
RewardFn = Callable[[Frame, tuple[Vec2, ...]], float]


class NavEnv:
    """Steppable navigation environment for one scenario at a time."""

    def __init__(
        self,
        cfg: WorkspaceConfig,
        orca_params: OrcaParams | None = None,
        horizon: int | None = None,
    ):
        cfg.validate()
        self.cfg = cfg
        self.orca = orca_params or OrcaParams()
        self.horizon = horizon if horizon is not None else cfg.horizon
        self.scenario: Scenario | None = None
        self.robot: AgentState | None = None
        self.humans: list[AgentState] = []
        self.t = 0
        self.positions: list[Vec2] = []

    def _effective_cfg_horizon(self) -> WorkspaceConfig:
        if self.horizon == self.cfg.horizon:
            return self.cfg
        from dataclasses import replace

        return replace(self.cfg, horizon=self.horizon)

    def _human_goal(self, index: int, t: int) -> Vec2:
        assert self.scenario is not None
        goal = self.scenario.human_inits[index].goal
        for switch in self.scenario.goal_switches:
            if switch.human_index == index and switch.step <= t:
                goal = switch.new_goal
        return goal

    def _make_frame(self) -> Frame:
        assert self.robot is not None
        visible = tuple(
            h for h in self.humans if geo.dist(self.robot.pos, h.pos) <= self.cfg.sense_range
        )
        predicted = predict_humans(visible, self.cfg.prediction_steps, self.cfg.dt)
        status = classify_frame(
            self.robot, self.humans, self.robot.goal, self.t, self._effective_cfg_horizon()
        )
        return Frame(
            t=self.t,
            robot=self.robot,
            humans=visible,
            all_humans=tuple(self.humans),
            predicted=predicted,
            status=status,
        )

    def reset(self, scenario: Scenario) -> Frame:
        self.scenario = scenario
        self.robot = AgentState(
            pos=scenario.robot_start,
            vel=(0.0, 0.0),
            radius=self.cfg.robot_radius,
            goal=scenario.robot_goal,
            pref_speed=self.cfg.v_max,
        )
        self.humans = [
            h.with_goal(self._human_goal(i, 0)) for i, h in enumerate(scenario.human_inits)
        ]
        self.t = 0
        self.positions = [self.robot.pos]
        return self._make_frame()

    def step(self, action: Vec2) -> Frame:
        assert self.robot is not None, "reset() before step()"
        # Human velocities are computed from the pre-step states so the
        # update is simultaneous; the robot is invisible to humans.
        new_humans: list[AgentState] = []
        for i, h in enumerate(self.humans):
            others = [o for j, o in enumerate(self.humans) if j != i]
            vel = orca_velocity(
                h,
                others,
                tau=self.orca.tau,
                dt=self.cfg.dt,
                responsibility=self.orca.responsibility,
                neighbor_cutoff=self.orca.neighbor_cutoff,
            )
            pos = (h.pos[0] + self.cfg.dt * vel[0], h.pos[1] + self.cfg.dt * vel[1])
            new_humans.append(h.moved_to(pos, vel))
        self.robot = step_robot(self.robot, action, self.cfg)
        self.t += 1
        self.humans = [
            h.with_goal(self._human_goal(i, self.t)) for i, h in enumerate(new_humans)
        ]
        self.positions.append(self.robot.pos)
        return self._make_frame()


def run_episode(
    scenario: Scenario,
    policy: Policy,
    cfg: WorkspaceConfig,
    reward_fn: RewardFn | None = None,
    horizon: int | None = None,
    orca_params: OrcaParams | None = None,
) -> Episode:
    """Roll one episode to its first terminal status.

    A policy emitting a non-finite action ends the episode immediately
    with a collision-equivalent outcome and a fault diagnostic.
    """
    env = NavEnv(cfg, orca_params=orca_params, horizon=horizon)
    frame = env.reset(scenario)
    frames = [frame]
    actions: list[Vec2] = []
    rewards: list[float] = []
    fault: str | None = None
    if reward_fn is not None:
        rewards.append(reward_fn(frame, tuple(env.positions)))

    while frame.status is Status.RUNNING:
        try:
            action = policy(frame)
            frame = env.step(action)
        except MalformedActionError as exc:
            fault = f"step {frame.t}: {exc}"
            break
        actions.append(env.robot.vel if env.robot else action)
        frames.append(frame)
        if reward_fn is not None:
            rewards.append(reward_fn(frame, tuple(env.positions)))

    success_step = None
    collision_step = None
    if fault is not None:
        outcome = Status.COLLISION
        collision_step = frames[-1].t
    else:
        outcome = frames[-1].status
        if outcome is Status.SUCCESS:
            success_step = frames[-1].t
        elif outcome is Status.COLLISION:
            collision_step = frames[-1].t

    path_length = sum(
        geo.dist(frames[i].robot.pos, frames[i + 1].robot.pos) for i in range(len(frames) - 1)
    )
    return Episode(
        frames=tuple(frames),
        actions=tuple(actions),
        outcome=outcome,
        success_step=success_step,
        collision_step=collision_step,
        path_length=path_length,
        rewards=tuple(rewards) if reward_fn is not None else None,
        fault=fault,
    )
