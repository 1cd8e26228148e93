"""Deterministic 2D crowd-navigation environment."""

from .episode import NavEnv, run_episode
from .kinematics import MalformedActionError, classify_frame, predict_humans, step_robot
from .orca import OrcaParams, orca_velocity, preferred_velocity
from .scenario import ScenarioGenerationError, generate_scenario, scenario_for_index
from .social_force import SocialForceParams, social_force_velocity
from .types import (
    AgentState,
    ContractViolation,
    Episode,
    Frame,
    GoalSwitch,
    Scenario,
    Status,
    WorkspaceConfig,
)

__all__ = [
    "AgentState",
    "ContractViolation",
    "Episode",
    "Frame",
    "GoalSwitch",
    "MalformedActionError",
    "NavEnv",
    "OrcaParams",
    "Scenario",
    "ScenarioGenerationError",
    "SocialForceParams",
    "Status",
    "WorkspaceConfig",
    "classify_frame",
    "generate_scenario",
    "orca_velocity",
    "predict_humans",
    "preferred_velocity",
    "run_episode",
    "scenario_for_index",
    "social_force_velocity",
    "step_robot",
]
