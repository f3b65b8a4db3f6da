"""Shared fixtures: the two small worked instances used across the suite."""

from __future__ import annotations

import numpy as np
import pytest

from statrcrt import ModulusSet, ObservationMatrix


@pytest.fixture
def instance_a():
    """Two numbers (truth 11 and 18), moduli 10 and 15, gamma 5."""
    ms = ModulusSet.from_weights(5.0, [2, 3], [1.0, 1.0])
    obs = ObservationMatrix(np.array([[1.0, 10.0], [9.0, 3.0]]))
    return ms, obs, np.array([11.0, 18.0])


@pytest.fixture
def instance_b():
    """Three numbers (truth 11, 18, 64), moduli 10, 15 and 35, gamma 5."""
    ms = ModulusSet.from_weights(5.0, [2, 3, 7], [1.0, 1.0, 1.0])
    obs = ObservationMatrix(
        np.array([
            [2.0, 10.0, 10.5],
            [9.0, 3.0, 19.1],
            [4.3, 3.6, 29.4],
        ])
    )
    return ms, obs, np.array([11.0, 18.0, 64.0])
