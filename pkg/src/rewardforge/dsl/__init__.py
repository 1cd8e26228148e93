"""Sandboxed reward expression language: parser, validator, evaluator."""

from .evaluator import (
    EvalContext,
    EvalInvariantError,
    context_at,
    episode_rewards,
    eval_reward,
    reward_fn_for,
)
from .grammar import GRAMMAR_REFERENCE
from .parser import (
    Limits,
    ParseIssue,
    ProgramParseError,
    Provenance,
    RewardProgram,
    parse_program,
    pretty,
)
from .seed import SEED_SOURCE, seed_program

__all__ = [
    "EvalContext",
    "EvalInvariantError",
    "GRAMMAR_REFERENCE",
    "Limits",
    "ParseIssue",
    "ProgramParseError",
    "Provenance",
    "RewardProgram",
    "SEED_SOURCE",
    "context_at",
    "episode_rewards",
    "eval_reward",
    "parse_program",
    "pretty",
    "reward_fn_for",
    "seed_program",
]
