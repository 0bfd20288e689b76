"""Named test functions used by the CLI, the verification battery and tests."""

from __future__ import annotations

import numpy as np

from .sampled import SampledFunction

TWO_PI = 2.0 * np.pi

__all__ = [
    "make_linear",
    "make_zigzag",
    "make_sine",
    "make_square_wave",
    "make_sawtooth",
    "make_random",
    "from_spec",
]


def make_linear(points: int = 2) -> SampledFunction:
    g = np.linspace(0.0, 1.0, max(points, 2))
    return SampledFunction(g, g.copy())


def make_zigzag(points: int = 5, low: float = 0.0, high: float = 1.0) -> SampledFunction:
    g = np.linspace(0.0, 1.0, max(points, 2))
    v = np.where(np.arange(g.size) % 2 == 0, low, high)
    return SampledFunction(g, v.astype(np.float64))


def make_sine(points: int = 256) -> SampledFunction:
    g = np.linspace(0.0, TWO_PI, points, endpoint=False)
    return SampledFunction(g, np.sin(g), periodic=True, period=TWO_PI)


def make_square_wave(points: int = 256) -> SampledFunction:
    """1 on [0, pi), 0 on [pi, 2*pi), sampled uniformly over one period."""
    g = np.linspace(0.0, TWO_PI, points, endpoint=False)
    v = (g < np.pi).astype(np.float64)
    return SampledFunction(g, v, periodic=True, period=TWO_PI)


def make_sawtooth(points: int = 256, period: float = 1.0) -> SampledFunction:
    g = np.linspace(0.0, period, points, endpoint=False)
    return SampledFunction(g, g / period, periodic=True, period=period)


def make_random(rng: np.random.Generator, points: int, periodic: bool = False) -> SampledFunction:
    if periodic:
        g = np.linspace(0.0, TWO_PI, points, endpoint=False)
        return SampledFunction(g, rng.uniform(-1, 1, points), periodic=True, period=TWO_PI)
    g = np.sort(rng.uniform(0.0, 1.0, points))
    g[0], g[-1] = 0.0, 1.0
    while np.any(np.diff(g) <= 0):
        g = np.linspace(0.0, 1.0, points)
    return SampledFunction(g, rng.uniform(-1, 1, points))


def from_spec(spec: str, seed: int = 0) -> SampledFunction:
    """Build a function from a CLI spec like ``zigzag:9`` or ``random:13``."""
    parts = spec.split(":")
    name = parts[0].lower()
    arg = int(parts[1]) if len(parts) > 1 else None
    if name == "linear":
        return make_linear(arg or 64)
    if name == "zigzag":
        return make_zigzag(arg or 5)
    if name == "sine":
        return make_sine(arg or 256)
    if name == "square":
        return make_square_wave(arg or 256)
    if name == "sawtooth":
        return make_sawtooth(arg or 256)
    if name == "random":
        rng = np.random.default_rng(seed)
        return make_random(rng, arg or 13)
    raise ValueError(f"unknown function spec {spec!r}")
