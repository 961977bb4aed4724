"""Shared fixtures and profile factories."""

from __future__ import annotations

import numpy as np
import pytest

from asdflow import PeriodicProfile, TorusGrid


@pytest.fixture
def grid64() -> TorusGrid:
    return TorusGrid(64)


@pytest.fixture
def grid256() -> TorusGrid:
    return TorusGrid(256)


def random_smooth_positive(grid: TorusGrid, rng: np.random.Generator,
                           base_range=(0.5, 3.0), modes: int = 6) -> PeriodicProfile:
    """Strictly positive trigonometric polynomial with decaying mode content."""
    base = rng.uniform(*base_range)
    values = np.full(grid.n, base)
    for m in range(1, modes + 1):
        amp = rng.uniform(-1.0, 1.0) * base * 0.3 / (m * m)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        values += amp * np.cos(m * grid.nodes + phase)
    assert values.min() > 0.1 * base
    return PeriodicProfile(grid, values)
