"""The seed reward: terminal bonus, collision penalty, progress shaping."""

from __future__ import annotations

from .parser import Limits, Provenance, RewardProgram, parse_program

SEED_SOURCE = """\
if reached_goal() then 10
elif collided() then -20
else 2 * (goal_dist(robot_prev_pos()) - goal_dist(robot_pos()))
"""


def seed_program(limits: Limits | None = None) -> RewardProgram:
    return parse_program(SEED_SOURCE, limits=limits, provenance=Provenance(kind="seed"))
