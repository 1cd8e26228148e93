"""rewardforge: progressive-fidelity search over navigation reward functions."""

__version__ = "0.1.0"
