"""Synthetic smooth images and warped pairs with known ground truth."""
import typing

import numpy as np
import pydantic

from ..models.config import SearchBox
from ..models.grid import Grid2, GridGeometry
from ..models.group import AffineElement
from .affine import invert
from .align import element_from_params
from .signal import act


__all__ = ["SyntheticPair", "blobs", "generate_pair", "random_params", "corpus"]


class SyntheticPair(pydantic.BaseModel):
    """Two images and, for matched pairs, the element relating them."""

    model_config = pydantic.ConfigDict(frozen=True)

    f1: Grid2
    f2: Grid2

    matched: bool
    """Whether f2 = ρ(g⁻¹)f1 for the recorded element."""

    params: typing.Optional[typing.Tuple[float, float, float, float, float, float]] = None
    """Search coordinates (tx, ty, ρ, θ, u, w) of g for matched pairs."""


def blobs(
    shape: typing.Tuple[int, int],
    rng: np.random.Generator,
    count: int = 3,
    spacing: float = 1.0,
    margin: float = 0.3,
) -> Grid2:
    """Sum of anisotropic Gaussian blobs on a centered grid, kept away from the border.

    Args:
        shape (typing.Tuple[int, int]): Grid shape.
        rng (np.random.Generator): Random source.
        count (int): Number of blobs.
        spacing (float): Grid spacing.
        margin (float): Fraction of each half-extent kept free of blob centers.
    """
    geometry = GridGeometry.centered(shape, spacing)
    points = geometry.points()
    half = np.array(shape) // 2 * spacing * (1.0 - margin)
    extent = float(min(shape)) * spacing
    values = np.zeros(shape)
    for _ in range(count):
        center = rng.uniform(-0.5, 0.5, size=2) * half
        widths = rng.uniform(0.06, 0.12, size=2) * extent
        angle = rng.uniform(0.0, np.pi)
        rotation = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
        local = (points - center) @ rotation
        values += rng.uniform(0.5, 1.0) * np.exp(-0.5 * np.sum((local / widths) ** 2, axis=-1))
    return Grid2.on(geometry, values)


def generate_pair(f: Grid2, g: AffineElement) -> typing.Tuple[Grid2, Grid2]:
    """The pair (f, ρ(g⁻¹)f), so that ρ(g) aligns the second image with the first."""
    return f, act(invert(g), f)


def random_params(rng: np.random.Generator, box: typing.Optional[SearchBox] = None) -> typing.Tuple[float, ...]:
    """Random search coordinates in the central half of every box axis."""
    box = box or SearchBox()
    return tuple(
        float(0.5 * (axis.lo + axis.hi) + 0.25 * (axis.hi - axis.lo) * rng.uniform(-1.0, 1.0))
        for axis in box.axes()
    )


def corpus(
    size: int,
    shape: typing.Tuple[int, int] = (24, 24),
    seed: int = 0,
    box: typing.Optional[SearchBox] = None,
) -> typing.List[SyntheticPair]:
    """Calibration corpus: the first half matched through random mid-box affines, the rest unrelated."""
    rng = np.random.default_rng(seed)
    pairs = []
    for index in range(size):
        f = blobs(shape, rng)
        if index < size // 2:
            params = random_params(rng, box)
            f1, f2 = generate_pair(f, element_from_params(params))
            pairs.append(SyntheticPair(f1=f1, f2=f2, matched=True, params=params))
        else:
            pairs.append(SyntheticPair(f1=f, f2=blobs(shape, rng), matched=False))
    return pairs
