"""Line-delimited record serialization for scenarios and episodes.

Files carry one JSON object per line with an explicit schema-version
header line; geometry is in meters and times in step indices.
"""

from __future__ import annotations

import json
from typing import IO, Iterable, Iterator

from .types import AgentState, Episode, Frame, GoalSwitch, Scenario, Status

SCENARIO_SCHEMA = "rewardforge.scenario.v1"
EPISODE_SCHEMA = "rewardforge.episode.v1"


def _agent_to_dict(a: AgentState) -> dict:
    return {
        "pos": list(a.pos),
        "vel": list(a.vel),
        "radius": a.radius,
        "goal": list(a.goal),
        "pref_speed": a.pref_speed,
    }


def _agent_from_dict(d: dict) -> AgentState:
    return AgentState(
        pos=tuple(d["pos"]),
        vel=tuple(d["vel"]),
        radius=d["radius"],
        goal=tuple(d["goal"]),
        pref_speed=d["pref_speed"],
    )


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "id": s.id,
        "robot_start": list(s.robot_start),
        "robot_goal": list(s.robot_goal),
        "humans": [_agent_to_dict(h) for h in s.human_inits],
        "goal_switches": [
            {"human_index": g.human_index, "step": g.step, "new_goal": list(g.new_goal)}
            for g in s.goal_switches
        ],
        "randomization_log": s.randomization_log,
    }


def scenario_from_dict(d: dict) -> Scenario:
    return Scenario(
        id=d["id"],
        robot_start=tuple(d["robot_start"]),
        robot_goal=tuple(d["robot_goal"]),
        human_inits=tuple(_agent_from_dict(h) for h in d["humans"]),
        goal_switches=tuple(
            GoalSwitch(g["human_index"], g["step"], tuple(g["new_goal"]))
            for g in d["goal_switches"]
        ),
        randomization_log=d.get("randomization_log", {}),
    )


def _frame_to_dict(f: Frame) -> dict:
    visible = [i for i, h in enumerate(f.all_humans) if h in f.humans]
    return {
        "t": f.t,
        "robot": _agent_to_dict(f.robot),
        "all_humans": [_agent_to_dict(h) for h in f.all_humans],
        "visible": visible,
        "status": f.status.value,
    }


def _frame_from_dict(d: dict, prediction_steps: int, dt: float) -> Frame:
    from .kinematics import predict_humans

    all_humans = tuple(_agent_from_dict(h) for h in d["all_humans"])
    humans = tuple(all_humans[i] for i in d["visible"])
    return Frame(
        t=d["t"],
        robot=_agent_from_dict(d["robot"]),
        humans=humans,
        all_humans=all_humans,
        predicted=predict_humans(humans, prediction_steps, dt),
        status=Status(d["status"]),
    )


def episode_to_dict(e: Episode) -> dict:
    return {
        "frames": [_frame_to_dict(f) for f in e.frames],
        "actions": [list(a) for a in e.actions],
        "outcome": e.outcome.value,
        "success_step": e.success_step,
        "collision_step": e.collision_step,
        "path_length": e.path_length,
        "rewards": list(e.rewards) if e.rewards is not None else None,
        "fault": e.fault,
    }


def episode_from_dict(d: dict, prediction_steps: int, dt: float) -> Episode:
    return Episode(
        frames=tuple(_frame_from_dict(f, prediction_steps, dt) for f in d["frames"]),
        actions=tuple(tuple(a) for a in d["actions"]),
        outcome=Status(d["outcome"]),
        success_step=d["success_step"],
        collision_step=d["collision_step"],
        path_length=d["path_length"],
        rewards=tuple(d["rewards"]) if d.get("rewards") is not None else None,
        fault=d.get("fault"),
    )


def write_records(fh: IO[str], schema: str, records: Iterable[dict]) -> None:
    fh.write(json.dumps({"schema": schema}) + "\n")
    for record in records:
        fh.write(json.dumps(record, sort_keys=True) + "\n")


def read_records(fh: IO[str], schema: str) -> Iterator[dict]:
    header = json.loads(fh.readline())
    if header.get("schema") != schema:
        raise ValueError(f"expected schema {schema}, found {header.get('schema')!r}")
    for line in fh:
        line = line.strip()
        if line:
            yield json.loads(line)
