"""Small 2D vector helpers on plain float tuples.

Tuples beat numpy arrays for 2-vectors in the simulation hot loops
(no per-op array allocation), and they hash/serialize trivially.
"""

from __future__ import annotations

import math

Vec2 = tuple[float, float]

ZERO: Vec2 = (0.0, 0.0)


def add(a: Vec2, b: Vec2) -> Vec2:
    return (a[0] + b[0], a[1] + b[1])


def sub(a: Vec2, b: Vec2) -> Vec2:
    return (a[0] - b[0], a[1] - b[1])


def scale(v: Vec2, s: float) -> Vec2:
    return (v[0] * s, v[1] * s)


def dot(a: Vec2, b: Vec2) -> float:
    return a[0] * b[0] + a[1] * b[1]


def det(a: Vec2, b: Vec2) -> float:
    """2D cross product; sign gives orientation of b relative to a."""
    return a[0] * b[1] - a[1] * b[0]


def norm_sq(v: Vec2) -> float:
    return v[0] * v[0] + v[1] * v[1]


def norm(v: Vec2) -> float:
    return math.hypot(v[0], v[1])


def dist(a: Vec2, b: Vec2) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def unit(v: Vec2, fallback: Vec2 = (0.0, 0.0)) -> Vec2:
    n = math.hypot(v[0], v[1])
    if n < 1e-12:
        return fallback
    return (v[0] / n, v[1] / n)


def perp(v: Vec2) -> Vec2:
    """Counter-clockwise perpendicular."""
    return (-v[1], v[0])


def clamp_norm(v: Vec2, limit: float) -> Vec2:
    """Radially clamp v to norm <= limit."""
    n = math.hypot(v[0], v[1])
    if n <= limit or n < 1e-12:
        return v
    f = limit / n
    return (v[0] * f, v[1] * f)


def is_finite(v: Vec2) -> bool:
    return math.isfinite(v[0]) and math.isfinite(v[1])
