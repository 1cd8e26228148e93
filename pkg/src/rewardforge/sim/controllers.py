"""Scripted robot controllers.

These provide the behaviorally diverse trajectories for the screening
dataset and the classical baseline rows in reports.  Each factory
returns a ``Frame -> action`` callable; stochastic controllers take an
explicit generator so episodes stay reproducible.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .. import geometry as geo
from ..geometry import Vec2
from .orca import orca_velocity
from .social_force import SocialForceParams, social_force_velocity
from .types import Frame, WorkspaceConfig

Controller = Callable[[Frame], Vec2]


def _toward(pos: Vec2, target: Vec2, v_max: float, dt: float) -> Vec2:
    offset = geo.sub(target, pos)
    d = geo.norm(offset)
    if d < 1e-12:
        return (0.0, 0.0)
    if d < v_max * dt:
        return geo.scale(offset, 1.0 / dt)
    return geo.scale(offset, v_max / d)


def straight(cfg: WorkspaceConfig) -> Controller:
    def policy(frame: Frame) -> Vec2:
        return _toward(frame.robot.pos, frame.robot.goal, cfg.v_max, cfg.dt)

    return policy


def noisy_straight(cfg: WorkspaceConfig, sigma: float, rng: np.random.Generator) -> Controller:
    def policy(frame: Frame) -> Vec2:
        base = _toward(frame.robot.pos, frame.robot.goal, cfg.v_max, cfg.dt)
        noise = rng.normal(0.0, sigma, size=2)
        return geo.clamp_norm((base[0] + float(noise[0]), base[1] + float(noise[1])), cfg.v_max)

    return policy


def random_walk(cfg: WorkspaceConfig, rng: np.random.Generator) -> Controller:
    def policy(frame: Frame) -> Vec2:
        theta = float(rng.uniform(0.0, 2.0 * math.pi))
        speed = float(rng.uniform(0.0, cfg.v_max))
        return (speed * math.cos(theta), speed * math.sin(theta))

    return policy


def stop_in_place(cfg: WorkspaceConfig) -> Controller:
    def policy(frame: Frame) -> Vec2:
        return (0.0, 0.0)

    return policy


def orca_robot(cfg: WorkspaceConfig, tau: float = 5.0) -> Controller:
    """Reciprocal-avoidance controller taking full avoidance responsibility
    (humans do not react to the robot)."""

    def policy(frame: Frame) -> Vec2:
        return orca_velocity(
            frame.robot,
            list(frame.humans),
            tau=tau,
            dt=cfg.dt,
            responsibility=1.0,
            neighbor_cutoff=cfg.sense_range,
        )

    return policy


def social_force_robot(cfg: WorkspaceConfig, params: SocialForceParams | None = None) -> Controller:
    sf = params or SocialForceParams()

    def policy(frame: Frame) -> Vec2:
        vel = social_force_velocity(frame.robot, list(frame.humans), sf, cfg.dt)
        return geo.clamp_norm(vel, cfg.v_max)

    return policy


def detour(cfg: WorkspaceConfig, side: float, offset: float = 2.0) -> Controller:
    """Route via a waypoint offset perpendicular to the start-goal segment."""

    state = {"start": None, "waypoint_done": False}

    def policy(frame: Frame) -> Vec2:
        if state["start"] is None:
            state["start"] = frame.robot.pos
        start = state["start"]
        goal = frame.robot.goal
        mid = geo.scale(geo.add(start, goal), 0.5)
        lateral = geo.unit(geo.perp(geo.sub(goal, start)), fallback=(0.0, 1.0))
        waypoint = geo.add(mid, geo.scale(lateral, side * offset))
        if not state["waypoint_done"] and geo.dist(frame.robot.pos, waypoint) < 0.5:
            state["waypoint_done"] = True
        target = goal if state["waypoint_done"] else waypoint
        return _toward(frame.robot.pos, target, cfg.v_max, cfg.dt)

    return policy


def roster(cfg: WorkspaceConfig, episode_rng: Callable[[str], np.random.Generator]):
    """The fixed controller roster, as (name, controller factory) pairs.

    ``episode_rng(name)`` supplies a fresh named stream per episode so
    that repeated roster entries do not share noise.
    """
    return [
        ("straight", lambda: straight(cfg)),
        ("orca", lambda: orca_robot(cfg)),
        ("social_force", lambda: social_force_robot(cfg)),
        ("noisy_straight_0.1", lambda: noisy_straight(cfg, 0.1, episode_rng("noisy_straight_0.1"))),
        ("noisy_straight_0.3", lambda: noisy_straight(cfg, 0.3, episode_rng("noisy_straight_0.3"))),
        ("random_walk", lambda: random_walk(cfg, episode_rng("random_walk"))),
        ("stop", lambda: stop_in_place(cfg)),
        ("detour_left", lambda: detour(cfg, side=1.0)),
        ("detour_right", lambda: detour(cfg, side=-1.0)),
    ]


ROSTER_NAMES = [
    "straight",
    "orca",
    "social_force",
    "noisy_straight_0.1",
    "noisy_straight_0.3",
    "random_walk",
    "stop",
    "detour_left",
    "detour_right",
]
