"""Social-force controller: goal relaxation plus exponential repulsion."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .. import geometry as geo
from ..geometry import Vec2
from ..rng import substream
from .types import AgentState
from .orca import preferred_velocity


@dataclass(frozen=True)
class SocialForceParams:
    relax_time: float = 0.5
    strength: float = 2.0
    falloff: float = 0.3

    def validate(self) -> None:
        if min(self.relax_time, self.strength, self.falloff) <= 0:
            raise ValueError("social-force params must all be positive")


def social_force_velocity(
    agent: AgentState,
    neighbors: list[AgentState] | tuple[AgentState, ...],
    params: SocialForceParams,
    dt: float,
    agent_index: int = 0,
) -> Vec2:
    """One relaxation step toward the goal plus pairwise repulsion.

    acceleration = (pref_vel - vel) / relax_time
                 + sum_j strength * exp((r_i + r_j - d_ij) / falloff) * n_ij
    where n_ij points from neighbor j toward the agent.
    """
    params.validate()
    pref = preferred_velocity(agent, dt)
    ax = (pref[0] - agent.vel[0]) / params.relax_time
    ay = (pref[1] - agent.vel[1]) / params.relax_time
    for other in neighbors:
        offset = geo.sub(agent.pos, other.pos)
        d = geo.norm(offset)
        if d < 1e-12:
            # Coincident centers: repulsion direction from a stream seeded
            # by the agent index so the tie-break is reproducible.
            theta = float(substream(agent_index, "sf-coincident").uniform(0.0, 2.0 * math.pi))
            n = (math.cos(theta), math.sin(theta))
        else:
            n = (offset[0] / d, offset[1] / d)
        magnitude = params.strength * math.exp(
            (agent.radius + other.radius - d) / params.falloff
        )
        ax += magnitude * n[0]
        ay += magnitude * n[1]
    new_vel = (agent.vel[0] + dt * ax, agent.vel[1] + dt * ay)
    return geo.clamp_norm(new_vel, agent.pref_speed)
