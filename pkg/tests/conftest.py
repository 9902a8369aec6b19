"""Shared fixtures: small charts, smooth images and Gaussian kernels."""
import math

import numpy as np
import pytest

from affgroup.models.chart import AxisKind, ChartAxis, QuadratureChart
from affgroup.models.grid import Grid2
from affgroup.modules.bank import gaussian_grid
from affgroup.modules.synth import blobs


def small_chart(count: int = 2, half: float = 0.3, theta_count: int = 4) -> QuadratureChart:
    """Positive-branch chart around the identity with full θ."""
    return QuadratureChart(
        rho=ChartAxis(kind=AxisKind.LOG_RADIAL, lo=-half, hi=half, count=count),
        theta=ChartAxis(lo=0.0, hi=2.0 * math.pi, count=theta_count),
        u=ChartAxis(lo=-half, hi=half, count=count),
        w=ChartAxis(kind=AxisKind.LOG_SIGNED, lo=-half, hi=half, count=count),
        signs=(1,),
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


@pytest.fixture
def chart() -> QuadratureChart:
    return small_chart()


@pytest.fixture
def image() -> Grid2:
    return blobs((16, 16), np.random.default_rng(1))


@pytest.fixture
def other_image() -> Grid2:
    return blobs((16, 16), np.random.default_rng(2))


@pytest.fixture
def kernel() -> Grid2:
    return gaussian_grid(1.0)
