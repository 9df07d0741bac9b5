"""Run configuration shared by every CLI command."""

from __future__ import annotations

from dataclasses import dataclass

from ..exactalg.polynomial import is_prime


@dataclass(frozen=True)
class RunConfig:
    """Knobs for a run.  ``p`` and ``window`` default to the script / ring values."""

    p: int | None = None
    window: int | None = None
    strict: bool = False
    attempts: int = 12
    budget: int | None = None
    seed: int = 0
    format: str = "json"
    random_per_ring: int = 3

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"--p must be prime, got {self.p}")
        if self.format not in ("json", "table"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.attempts < 1:
            raise ValueError("attempt budget must be positive")

    def window_for(self, ring) -> int:
        w = ring.default_window if self.window is None else self.window
        if w < 2 * ring.c + 2:
            raise ValueError(f"window {w} is below the minimum 2c+2 = {2 * ring.c + 2}")
        return w
