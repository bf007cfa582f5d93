import math

import pytest

from shoreline.trajectory import Fleet, Ray


@pytest.fixture
def ray_fleet():
    def build(n: int, offset: float = 0.0) -> Fleet:
        return Fleet(tuple(Ray(offset + 2.0 * math.pi * k / n) for k in range(n)))

    return build
