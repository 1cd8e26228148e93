"""Sandboxed evaluation of validated reward programs.

Evaluation is a pure function of (program, context): no I/O, no clock,
no randomness.  Every built-in is total -- division and logarithms are
guarded, exponentials are capped, and all arithmetic saturates at a
large magnitude -- so a validated program returns a finite scalar on
every reachable frame.  The final value is clamped to [-1e6, 1e6].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .. import geometry as geo
from ..geometry import Vec2
from ..sim.types import Frame, Scenario, Status, WorkspaceConfig
from .parser import Agg, Call, Expr, If, Let, Name, Num, RewardProgram

_SATURATION = 1e18
_OUTPUT_LIMIT = 1e6
_DIV_FLOOR = 1e-9
_LOG_FLOOR = 1e-9
_EXP_CAP = 50.0


class EvalInvariantError(Exception):
    """An evaluation produced a non-finite value despite the guards.

    Upstream treats this as candidate invalidation, never a crash.
    """


@dataclass(frozen=True)
class EvalContext:
    """One frame plus the trajectory history the program may inspect."""

    frame: Frame
    scenario: Scenario
    prefix: tuple[Vec2, ...]  # robot positions up to and including this frame
    cfg: WorkspaceConfig
    horizon: int | None = None

    def __post_init__(self):
        if not self.prefix:
            raise ValueError("trajectory prefix must be nonempty")

    @property
    def robot_prev_pos(self) -> Vec2:
        return self.prefix[-2] if len(self.prefix) >= 2 else self.prefix[-1]

    @property
    def effective_horizon(self) -> int:
        return self.horizon if self.horizon is not None else self.cfg.horizon


def _sat(x: float) -> float:
    if x > _SATURATION:
        return _SATURATION
    if x < -_SATURATION:
        return -_SATURATION
    return x


def _guarded_div(a: float, b: float) -> float:
    if abs(b) < _DIV_FLOOR:
        b = _DIV_FLOOR if b >= 0 else -_DIV_FLOOR
    return _sat(a / b)


def _eval(node: Expr, ctx: EvalContext, env: dict[str, object]) -> object:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Name):
        return env[node.ident]
    if isinstance(node, Let):
        value = _eval(node.value, ctx, env)
        return _eval(node.body, ctx, {**env, node.name: value})
    if isinstance(node, If):
        for cond, expr in node.branches:
            if _eval(cond, ctx, env):
                return _eval(expr, ctx, env)
        return _eval(node.orelse, ctx, env)
    if isinstance(node, Agg):
        humans = ctx.frame.humans
        if node.kind == "sum_over_humans":
            total = 0.0
            for idx in range(len(humans)):
                total = _sat(total + _eval(node.body, ctx, {**env, node.var: idx}))
            return total
        if not humans:
            # "Nothing sensed" reads as "farthest plausible" for the
            # distance-like quantities minimized in practice.
            return ctx.cfg.sense_range
        return min(_eval(node.body, ctx, {**env, node.var: idx}) for idx in range(len(humans)))
    if isinstance(node, Call):
        return _call(node, ctx, env)
    raise TypeError(f"unknown node {node!r}")


def _call(node: Call, ctx: EvalContext, env: dict[str, object]) -> object:
    fn = node.fn
    args = [_eval(a, ctx, env) for a in node.args]

    if fn == "add":
        return _sat(args[0] + args[1])
    if fn == "sub":
        if isinstance(args[0], tuple):
            return (args[0][0] - args[1][0], args[0][1] - args[1][1])
        return _sat(args[0] - args[1])
    if fn == "mul":
        return _sat(args[0] * args[1])
    if fn == "div":
        return _guarded_div(args[0], args[1])
    if fn == "neg":
        return -args[0]
    if fn == "min":
        return min(args[0], args[1])
    if fn == "max":
        return max(args[0], args[1])
    if fn == "abs":
        return abs(args[0])
    if fn == "clamp":
        return min(max(args[0], args[1]), args[2])
    if fn == "exp":
        return math.exp(min(args[0], _EXP_CAP))
    if fn == "log":
        return math.log(max(args[0], _LOG_FLOOR))
    if fn == "sqrt":
        return math.sqrt(max(args[0], 0.0))
    if fn == "tanh":
        return math.tanh(args[0])
    if fn == "pow":
        return _sat(float(args[0]) ** int(args[1]))
    if fn == "lt":
        return args[0] < args[1]
    if fn == "le":
        return args[0] <= args[1]
    if fn == "gt":
        return args[0] > args[1]
    if fn == "ge":
        return args[0] >= args[1]
    if fn == "eq":
        return args[0] == args[1]
    if fn == "ne":
        return args[0] != args[1]
    if fn == "and":
        return args[0] and args[1]
    if fn == "or":
        return args[0] or args[1]
    if fn == "not":
        return not args[0]
    if fn == "dist":
        return geo.dist(args[0], args[1])
    if fn == "norm":
        return geo.norm(args[0])
    if fn == "dot":
        return _sat(geo.dot(args[0], args[1]))

    frame = ctx.frame
    if fn == "robot_pos":
        return frame.robot.pos
    if fn == "robot_prev_pos":
        return ctx.robot_prev_pos
    if fn == "robot_vel":
        return frame.robot.vel
    if fn == "robot_radius":
        return frame.robot.radius
    if fn == "start":
        return ctx.scenario.robot_start
    if fn == "goal":
        return ctx.scenario.robot_goal
    if fn == "goal_dist":
        point = args[0] if args else frame.robot.pos
        return geo.dist(point, ctx.scenario.robot_goal)
    if fn == "step_index":
        return float(frame.t)
    if fn == "horizon":
        return float(ctx.effective_horizon)
    if fn == "reached_goal":
        return frame.status is Status.SUCCESS
    if fn == "collided":
        return frame.status is Status.COLLISION
    if fn == "timed_out":
        return frame.status is Status.TIMEOUT
    if fn == "count_within":
        radius = args[0]
        return float(
            sum(1 for h in frame.humans if geo.dist(frame.robot.pos, h.pos) <= radius)
        )
    if fn == "h_pos":
        return frame.humans[args[0]].pos
    if fn == "h_vel":
        return frame.humans[args[0]].vel
    if fn == "h_radius":
        return frame.humans[args[0]].radius
    if fn == "predicted":
        row = frame.predicted[args[0]]
        k = min(int(args[1]), len(row))
        return row[k - 1]
    raise TypeError(f"unknown builtin {fn!r}")


def eval_reward(program: RewardProgram, ctx: EvalContext) -> float:
    """Evaluate a validated program on one frame; always a finite scalar."""
    value = _eval(program.ast, ctx, {})
    result = float(value)
    if not math.isfinite(result):
        raise EvalInvariantError(f"non-finite reward from program {program.digest}")
    return min(max(result, -_OUTPUT_LIMIT), _OUTPUT_LIMIT)


def context_at(
    episode_frames,
    scenario: Scenario,
    cfg: WorkspaceConfig,
    t: int,
    horizon: int | None = None,
) -> EvalContext:
    prefix = tuple(f.robot.pos for f in episode_frames[: t + 1])
    return EvalContext(
        frame=episode_frames[t], scenario=scenario, prefix=prefix, cfg=cfg, horizon=horizon
    )


def episode_rewards(
    program: RewardProgram,
    episode,
    scenario: Scenario,
    cfg: WorkspaceConfig,
    horizon: int | None = None,
) -> list[float]:
    """Per-frame rewards, with each frame seeing only its own history."""
    rewards = []
    prefix: list[Vec2] = []
    for frame in episode.frames:
        prefix.append(frame.robot.pos)
        ctx = EvalContext(
            frame=frame, scenario=scenario, prefix=tuple(prefix), cfg=cfg, horizon=horizon
        )
        rewards.append(eval_reward(program, ctx))
    return rewards


def reward_fn_for(
    program: RewardProgram,
    scenario: Scenario,
    cfg: WorkspaceConfig,
    horizon: int | None = None,
):
    """Adapter matching the environment's per-frame reward hook."""

    def fn(frame: Frame, prefix: tuple[Vec2, ...]) -> float:
        ctx = EvalContext(
            frame=frame, scenario=scenario, prefix=prefix, cfg=cfg, horizon=horizon
        )
        return eval_reward(program, ctx)

    return fn
