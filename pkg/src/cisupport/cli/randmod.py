"""Seeded random graded modules for regression sweeps."""

from __future__ import annotations

import random

from ..cimodule import CIRing, GradedMatrix, ModulePresentation, free_module, present
from ..resolution import mcm_approximation


def random_module(ring: CIRing, shape: tuple[int, int, int], seed: int) -> ModulePresentation:
    """Cokernel of a random homogeneous ``rows x cols`` matrix, then ``Ω^d`` of it.

    Generators sit in degree 0; column ``s`` has a degree drawn from
    ``1..degree_bound`` and entries that are random forms of that degree.
    The same ``(ring, shape, seed)`` always gives the same module.
    """
    rows, cols, bound = shape
    if rows < 1 or cols < 0 or bound < 1:
        raise ValueError(f"bad shape {shape}")
    label = f"random{shape}#{seed}"
    if cols == 0:
        M = free_module(ring, [0] * rows)
        M.label = label
        return M
    rng = random.Random(seed)
    Q = ring.Q
    degs = [rng.randint(1, bound) for _ in range(cols)]
    entries = []
    for _ in range(rows):
        row = []
        for d in degs:
            f = Q.zero()
            for m in ring.basis(d):
                f = f + Q.monomial(m, rng.randrange(ring.p))
            row.append(f)
        entries.append(row)
    P = GradedMatrix.from_polys(ring, entries, rows=[0] * rows, cols=degs)
    M = mcm_approximation(present(ring, P, label=label))
    M.label = label
    return M
