"""Reciprocal collision avoidance via half-plane constraints.

Each neighbor induces one half-plane of permitted velocities derived
from the truncated velocity-obstacle cone over a horizon ``tau``
(already-overlapping pairs use the single time step instead).  The
returned velocity is the feasible point closest to the agent's
preferred velocity, found with the standard incremental 2D linear
program; when the program is infeasible the velocity minimizing the
maximum constraint violation is returned instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .. import geometry as geo
from ..geometry import Vec2
from .types import AgentState

_EPS = 1e-10

# line.point is a point on the boundary, line.direction its unit direction;
# permitted velocities lie to the LEFT of the directed line.
Line = tuple[Vec2, Vec2]


@dataclass(frozen=True)
class OrcaParams:
    tau: float = 5.0
    neighbor_cutoff: float = 10.0
    responsibility: float = 0.5


def preferred_velocity(agent: AgentState, dt: float) -> Vec2:
    """Straight-to-goal velocity, capped, with exact arrival inside one step."""
    to_goal = geo.sub(agent.goal, agent.pos)
    d = geo.norm(to_goal)
    if d < 1e-12:
        return (0.0, 0.0)
    if d < agent.pref_speed * dt:
        return geo.scale(to_goal, 1.0 / dt)
    return geo.scale(to_goal, agent.pref_speed / d)


def _avoidance_line(
    agent: AgentState, other: AgentState, tau: float, dt: float, responsibility: float
) -> Line:
    rel_pos = geo.sub(other.pos, agent.pos)
    rel_vel = geo.sub(agent.vel, other.vel)
    dist_sq = geo.norm_sq(rel_pos)
    combined_r = agent.radius + other.radius
    combined_r_sq = combined_r * combined_r

    if dist_sq > combined_r_sq:
        inv_tau = 1.0 / tau
        w = geo.sub(rel_vel, geo.scale(rel_pos, inv_tau))
        w_len_sq = geo.norm_sq(w)
        dot1 = geo.dot(w, rel_pos)
        if dot1 < 0.0 and dot1 * dot1 > combined_r_sq * w_len_sq:
            # Closest point lies on the truncation disc of the cone.
            w_len = math.sqrt(w_len_sq)
            unit_w = geo.scale(w, 1.0 / w_len)
            direction = (unit_w[1], -unit_w[0])
            u = geo.scale(unit_w, combined_r * inv_tau - w_len)
        else:
            # Closest point lies on one of the cone legs.
            leg = math.sqrt(dist_sq - combined_r_sq)
            if geo.det(rel_pos, w) > 0.0:
                direction = (
                    (rel_pos[0] * leg - rel_pos[1] * combined_r) / dist_sq,
                    (rel_pos[0] * combined_r + rel_pos[1] * leg) / dist_sq,
                )
            else:
                direction = (
                    -(rel_pos[0] * leg + rel_pos[1] * combined_r) / dist_sq,
                    (rel_pos[0] * combined_r - rel_pos[1] * leg) / dist_sq,
                )
            dot2 = geo.dot(rel_vel, direction)
            u = geo.sub(geo.scale(direction, dot2), rel_vel)
    else:
        # Agents already overlap: resolve within a single time step.
        inv_dt = 1.0 / dt
        w = geo.sub(rel_vel, geo.scale(rel_pos, inv_dt))
        w_len = geo.norm(w)
        if w_len > _EPS:
            unit_w = geo.scale(w, 1.0 / w_len)
        else:
            # Degenerate geometry: push directly apart (or along x for
            # coincident centers); keeps the construction division-free.
            unit_w = geo.unit(geo.scale(rel_pos, -1.0), fallback=(1.0, 0.0))
        direction = (unit_w[1], -unit_w[0])
        u = geo.scale(unit_w, combined_r * inv_dt - w_len)

    point = geo.add(agent.vel, geo.scale(u, responsibility))
    return (point, direction)


def _linear_program_1(
    lines: list[Line],
    line_no: int,
    radius: float,
    opt_velocity: Vec2,
    direction_opt: bool,
) -> Vec2 | None:
    """Optimum on the boundary line ``line_no`` subject to lines before it."""
    point, direction = lines[line_no]
    dot_pd = geo.dot(point, direction)
    discriminant = dot_pd * dot_pd + radius * radius - geo.norm_sq(point)
    if discriminant < 0.0:
        return None
    sqrt_disc = math.sqrt(discriminant)
    t_left = -dot_pd - sqrt_disc
    t_right = -dot_pd + sqrt_disc

    for i in range(line_no):
        p_i, d_i = lines[i]
        denominator = geo.det(direction, d_i)
        numerator = geo.det(d_i, geo.sub(point, p_i))
        if abs(denominator) <= _EPS:
            if numerator < 0.0:
                return None
            continue
        t = numerator / denominator
        if denominator >= 0.0:
            t_right = min(t_right, t)
        else:
            t_left = max(t_left, t)
        if t_left > t_right:
            return None

    if direction_opt:
        t = t_right if geo.dot(opt_velocity, direction) > 0.0 else t_left
    else:
        t = geo.dot(direction, geo.sub(opt_velocity, point))
        t = min(max(t, t_left), t_right)
    return geo.add(point, geo.scale(direction, t))


def _linear_program_2(
    lines: list[Line], radius: float, opt_velocity: Vec2, direction_opt: bool
) -> tuple[int, Vec2]:
    """Incremental LP; returns (first failing line index or len(lines), result)."""
    if direction_opt:
        result = geo.scale(opt_velocity, radius)
    elif geo.norm_sq(opt_velocity) > radius * radius:
        result = geo.scale(geo.unit(opt_velocity), radius)
    else:
        result = opt_velocity

    for i, (p_i, d_i) in enumerate(lines):
        if geo.det(d_i, geo.sub(p_i, result)) > 0.0:
            new_result = _linear_program_1(lines, i, radius, opt_velocity, direction_opt)
            if new_result is None:
                return i, result
            result = new_result
    return len(lines), result


def _linear_program_3(lines: list[Line], begin_line: int, radius: float, result: Vec2) -> Vec2:
    """Safest-velocity fallback: minimize the maximum constraint violation."""
    distance = 0.0
    for i in range(begin_line, len(lines)):
        p_i, d_i = lines[i]
        if geo.det(d_i, geo.sub(p_i, result)) > distance:
            proj_lines: list[Line] = []
            for j in range(i):
                p_j, d_j = lines[j]
                determinant = geo.det(d_i, d_j)
                if abs(determinant) <= _EPS:
                    if geo.dot(d_i, d_j) > 0.0:
                        continue
                    point = geo.scale(geo.add(p_i, p_j), 0.5)
                else:
                    t = geo.det(d_j, geo.sub(p_i, p_j)) / determinant
                    point = geo.add(p_i, geo.scale(d_i, t))
                proj_lines.append((point, geo.unit(geo.sub(d_j, d_i))))
            fail, new_result = _linear_program_2(
                proj_lines, radius, (-d_i[1], d_i[0]), True
            )
            if fail >= len(proj_lines):
                result = new_result
            distance = geo.det(d_i, geo.sub(p_i, result))
    return result


def orca_velocity(
    agent: AgentState,
    neighbors: list[AgentState] | tuple[AgentState, ...],
    tau: float,
    dt: float,
    responsibility: float = 0.5,
    neighbor_cutoff: float = 10.0,
    pref_velocity: Vec2 | None = None,
) -> Vec2:
    """New velocity for ``agent`` avoiding ``neighbors`` reciprocally.

    ``responsibility`` is the fraction of the mutual avoidance effort
    this agent takes on (0.5 among symmetric peers, 1.0 against agents
    that do not react).
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    pref = preferred_velocity(agent, dt) if pref_velocity is None else pref_velocity
    lines = [
        _avoidance_line(agent, other, tau, dt, responsibility)
        for other in neighbors
        if geo.dist(agent.pos, other.pos) <= neighbor_cutoff
    ]
    if not lines:
        return geo.clamp_norm(pref, agent.pref_speed)
    fail, result = _linear_program_2(lines, agent.pref_speed, pref, False)
    if fail < len(lines):
        result = _linear_program_3(lines, fail, agent.pref_speed, result)
    return result
