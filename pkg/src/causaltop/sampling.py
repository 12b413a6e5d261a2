"""Seeded test-point generators that hit every causal class, including the light cone."""

from __future__ import annotations

import numpy as np

from .geometry import Event

DISPLACEMENT_KINDS = ("null", "timelike", "spacelike", "box")


def unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def displacement_of(rng: np.random.Generator, n: int, kind: str, scale: float = 1.0) -> np.ndarray:
    """One displacement of the requested causal kind, kept well away from the null band
    unless it is meant to be null."""
    r = rng.uniform(0.05, 1.0) * scale
    u = unit_vector(rng, n)
    sign = 1.0 if rng.random() < 0.5 else -1.0
    if kind == "null":
        return np.concatenate(([sign * r], r * u))
    if kind == "timelike":
        return np.concatenate(([sign * r], r * rng.uniform(0.0, 0.9) * u))
    if kind == "spacelike":
        return np.concatenate(([sign * r * rng.uniform(0.0, 0.9)], r * u))
    if kind == "box":
        return rng.uniform(-scale, scale, n + 1)
    raise ValueError(f"unknown displacement kind {kind!r}")


def future_displacement(rng: np.random.Generator, n: int, kind: str, scale: float = 1.0) -> np.ndarray:
    v = displacement_of(rng, n, kind, scale)
    v[0] = abs(v[0])
    return v


def mixed_points(rng: np.random.Generator, center: Event, count: int, scale: float = 1.0) -> list:
    """Points around ``center``: a mix of null, timelike, spacelike, uniform, and the centre itself."""
    c = np.asarray(center.coords)
    n = center.n
    out = []
    for i in range(count):
        slot = i % 9
        if slot == 8:
            out.append(center)
            continue
        kind = DISPLACEMENT_KINDS[slot % 4]
        out.append(Event(tuple(c + displacement_of(rng, n, kind, scale))))
    return out
