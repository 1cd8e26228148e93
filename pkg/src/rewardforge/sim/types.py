"""Domain types for the crowd-navigation environment.

All types are immutable; the environment produces fresh values each
step.  Geometry is in meters, time in step indices unless a field says
otherwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from ..geometry import Vec2, dist


class ContractViolation(Exception):
    """An operation was called outside its documented contract."""


class Status(str, enum.Enum):
    RUNNING = "running"
    SUCCESS = "success"
    COLLISION = "collision"
    TIMEOUT = "timeout"


@dataclass(frozen=True)
class WorkspaceConfig:
    """Environment parameters: workspace geometry, timing, and crowd traits."""

    width: float = 12.0
    height: float = 12.0
    dt: float = 0.25
    horizon: int = 200
    v_max: float = 1.0
    robot_radius: float = 0.3
    goal_tolerance: float = 0.3
    sense_range: float = 5.0
    gamma: float = 0.99
    human_count: int = 10
    randomize: bool = True
    human_vmax_range: tuple[float, float] = (0.5, 1.5)
    human_radius_range: tuple[float, float] = (0.3, 0.5)
    prediction_steps: int = 5
    seed: int = 0

    def validate(self) -> None:
        problems = []
        if not self.dt > 0:
            problems.append("dt must be > 0")
        if self.horizon < 1:
            problems.append("horizon must be >= 1")
        if not self.v_max > 0:
            problems.append("v_max must be > 0")
        if not (0.0 <= self.gamma < 1.0):
            problems.append("gamma must be in [0, 1)")
        if not self.goal_tolerance > 0:
            problems.append("goal_tolerance must be > 0")
        if not (0 <= self.human_count <= 20):
            problems.append("human_count must be in [0, 20]")
        if self.prediction_steps < 1:
            problems.append("prediction_steps must be >= 1")
        for name in ("human_vmax_range", "human_radius_range"):
            lo, hi = getattr(self, name)
            if not (lo <= hi and lo > 0):
                problems.append(f"{name} must satisfy 0 < low <= high")
        if problems:
            raise ContractViolation("; ".join(problems))


@dataclass(frozen=True)
class AgentState:
    pos: Vec2
    vel: Vec2
    radius: float
    goal: Vec2
    pref_speed: float

    def moved_to(self, pos: Vec2, vel: Vec2) -> "AgentState":
        return replace(self, pos=pos, vel=vel)

    def with_goal(self, goal: Vec2) -> "AgentState":
        return replace(self, goal=goal)


@dataclass(frozen=True)
class Frame:
    """One per-step state snapshot.

    ``humans`` holds only agents within sensing range (the policy's
    view); ``all_humans`` retains the full crowd for collision checks
    and replay.  ``predicted`` has one row of ``K`` constant-velocity
    forecast points per visible human, aligned with ``humans``.
    """

    t: int
    robot: AgentState
    humans: tuple[AgentState, ...]
    all_humans: tuple[AgentState, ...]
    predicted: tuple[tuple[Vec2, ...], ...]
    status: Status


@dataclass(frozen=True)
class GoalSwitch:
    human_index: int
    step: int
    new_goal: Vec2


@dataclass(frozen=True)
class Scenario:
    id: str
    robot_start: Vec2
    robot_goal: Vec2
    human_inits: tuple[AgentState, ...]
    goal_switches: tuple[GoalSwitch, ...] = ()
    randomization_log: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Episode:
    frames: tuple[Frame, ...]
    actions: tuple[Vec2, ...]
    outcome: Status
    success_step: int | None
    collision_step: int | None
    path_length: float
    rewards: tuple[float, ...] | None = None
    fault: str | None = None

    @property
    def terminal_frame(self) -> Frame:
        return self.frames[-1]

    def progress_at(self, f: int, goal: Vec2) -> float:
        """Distance-to-goal reduction from the start up to frame f.

        Frames past the episode's end reuse the terminal state.
        """
        idx = min(f, len(self.frames) - 1)
        return dist(self.frames[0].robot.pos, goal) - dist(self.frames[idx].robot.pos, goal)
