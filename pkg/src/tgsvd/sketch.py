"""Sketch parameters and seeded Gaussian test matrices."""

from dataclasses import dataclass

import numpy as np

from .errors import SketchSizeError

MAX_POWER_ITERATIONS = 8


@dataclass(frozen=True)
class SketchConfig:
    """Target ranks ``r1, r2``, oversampling ``p1, p2``, power iterations ``q`` and the RNG seed."""

    r1: int
    r2: int
    p1: int = 5
    p2: int = 5
    q: int = 0
    seed: int = 0

    def __post_init__(self):
        for name in ("r1", "r2"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        for name in ("p1", "p2", "q"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.q > MAX_POWER_ITERATIONS:
            raise ValueError(f"q = {self.q} exceeds the guard of {MAX_POWER_ITERATIONS}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")

    @property
    def width1(self):
        return self.r1 + self.p1

    @property
    def width2(self):
        return self.r2 + self.p2

    def check(self, rows_x, cols, rows_y):
        """Raise :class:`SketchSizeError` unless both sketches fit the data."""
        if self.width1 > min(rows_x, cols):
            raise SketchSizeError(f"r1 + p1 = {self.width1} exceeds min({rows_x}, {cols})")
        if self.width2 > min(rows_y, cols):
            raise SketchSizeError(f"r2 + p2 = {self.width2} exceeds min({rows_y}, {cols})")

    def rng(self, *key):
        """Generator for this seed; ``key`` derives an independent child stream (e.g. a slice index)."""
        return np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=tuple(key)))


def gaussian(rng, *shape):
    return rng.standard_normal(shape)
