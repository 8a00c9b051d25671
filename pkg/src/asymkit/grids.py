"""Deterministic sample grids on U(1) and SU(2).

Used wherever a function on a Lie group has to be compared pointwise
(orbit Grams, symmetry detection, witness verification).  The grids are
fixed constructions, not random draws, so every run sees the same points.
"""

from __future__ import annotations

import numpy as np

from .groups import QUAT_IDENTITY, QUAT_MINUS_IDENTITY, TWO_PI

DEFAULT_GRID_SIZE = 64


def u1_grid(n_points: int = DEFAULT_GRID_SIZE) -> np.ndarray:
    """Equispaced angles; differences of grid points stay on the grid."""
    return np.arange(n_points) * (TWO_PI / n_points)


def halton(index: int, base: int) -> float:
    """Radical-inverse (van der Corput) value of `index` in `base`."""
    result, f = 0.0, 1.0
    i = index
    while i > 0:
        f /= base
        result += f * (i % base)
        i //= base
    return result


def su2_grid(n_points: int = DEFAULT_GRID_SIZE) -> np.ndarray:
    """Low-discrepancy quaternions covering SU(2), with +/- identity first.

    Uniform points on the 3-sphere from a Halton sequence (bases 2, 3, 5)
    through the subgroup-algorithm map, so the set is deterministic and
    spread out rather than clustered.
    """
    pts = np.empty((n_points, 4))
    pts[0] = QUAT_IDENTITY
    if n_points > 1:
        pts[1] = QUAT_MINUS_IDENTITY
    for k in range(2, n_points):
        u = halton(k - 1, 2)
        v = halton(k - 1, 3)
        w = halton(k - 1, 5)
        a, b = np.sqrt(1.0 - u), np.sqrt(u)
        pts[k] = [
            a * np.sin(TWO_PI * v),
            a * np.cos(TWO_PI * v),
            b * np.sin(TWO_PI * w),
            b * np.cos(TWO_PI * w),
        ]
    return pts


def grid_for(group, n_points: int = DEFAULT_GRID_SIZE):
    """Sample elements for any group: all of them (finite) or a fixed grid."""
    kind = group.kind
    if kind == "finite":
        return list(group.elements())
    if kind == "u1":
        n = max(n_points, 2 * group.band_limit + 1)
        return list(u1_grid(n))
    return list(su2_grid(n_points))
