"""Robot kinematics, termination classification, and trajectory forecasts."""

from __future__ import annotations

from .. import geometry as geo
from ..geometry import Vec2
from .types import AgentState, Status, WorkspaceConfig


class MalformedActionError(Exception):
    """Policy emitted a non-finite action."""


def step_robot(state: AgentState, action: Vec2, cfg: WorkspaceConfig) -> AgentState:
    """Integrate one holonomic step: actions larger than v_max are radially clamped."""
    if not geo.is_finite(action):
        raise MalformedActionError(f"non-finite action {action!r}")
    a = geo.clamp_norm((float(action[0]), float(action[1])), cfg.v_max)
    new_pos = (state.pos[0] + cfg.dt * a[0], state.pos[1] + cfg.dt * a[1])
    return state.moved_to(new_pos, a)


def classify_frame(
    robot: AgentState,
    humans: tuple[AgentState, ...] | list[AgentState],
    goal: Vec2,
    t: int,
    cfg: WorkspaceConfig,
) -> Status:
    """Terminal-status check; collision takes precedence over success."""
    for h in humans:
        if geo.dist(robot.pos, h.pos) <= robot.radius + h.radius:
            return Status.COLLISION
    if geo.dist(robot.pos, goal) <= cfg.goal_tolerance:
        return Status.SUCCESS
    if t >= cfg.horizon - 1:
        return Status.TIMEOUT
    return Status.RUNNING


def predict_humans(
    humans: tuple[AgentState, ...] | list[AgentState], k: int, dt: float
) -> tuple[tuple[Vec2, ...], ...]:
    """Constant-velocity forecasts: one row of k future positions per human."""
    rows = []
    for h in humans:
        rows.append(
            tuple(
                (h.pos[0] + i * dt * h.vel[0], h.pos[1] + i * dt * h.vel[1])
                for i in range(1, k + 1)
            )
        )
    return tuple(rows)
