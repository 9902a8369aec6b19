"""Gaussian kernels and the standard kernel bank."""
import math
import typing

import numpy as np

from ..models.config import BankConfig, RunConfig
from ..models.grid import Grid2
from ..models.group import Mat2
from ..models.kernel import GaussianBump, KernelTerm, SeparableKernel


__all__ = ["gaussian_grid", "lifting_kernel", "standard_bank", "group_delta_kernel", "select_kernels"]


def gaussian_grid(width: float, spacing: float = 1.0, radius: float = 3.0) -> Grid2:
    """Isotropic Gaussian exp(−|x|²/(2·width²)) on a centered grid, normalized to unit 𝕃₁ mass.

    Args:
        width (float): Standard deviation in physical units.
        spacing (float): Grid spacing.
        radius (float): Half-extent of the grid, in widths.
    """
    half = max(1, int(math.ceil(radius * width / spacing)))
    offsets = spacing * np.arange(-half, half + 1)
    x, y = np.meshgrid(offsets, offsets, indexing="ij")
    values = np.exp(-(x * x + y * y) / (2.0 * width * width))
    values /= values.sum() * spacing ** 2
    return Grid2.centered(values, spacing)


def lifting_kernel(config: RunConfig, spacing: float = 1.0) -> Grid2:
    """Kernel of the lifting layer for a run."""
    return gaussian_grid(config.lift_width * spacing, spacing, config.kernel_radius)


def standard_bank(config: typing.Optional[BankConfig] = None, spacing: float = 1.0, radius: float = 3.0) -> typing.List[SeparableKernel]:
    """The five single-term kernels the invariance criteria are checked against.

    Every bump center is paired with the narrow spatial width; the first two centers (the
    identity and the first mid-chart matrix) are also paired with the wide one.

    Args:
        config (typing.Optional[BankConfig]): Widths and centers.
        spacing (float): Grid spacing of the signals the bank is applied to.
        radius (float): Half-extent of the spatial factors, in widths.
    """
    config = config or BankConfig()
    pairs = [(center, width) for center in config.centers for width in config.widths][:5]
    bank = []
    for center, width in pairs:
        term = KernelTerm(
            k1=gaussian_grid(width * spacing, spacing, radius),
            k2=GaussianBump(center=Mat2.from_array(center), width=config.bump_width),
        )
        index = config.centers.index(center)
        bank.append(SeparableKernel(terms=[term], name=f"c{index}-w{width:g}"))
    return bank


def group_delta_kernel(
    center: Mat2,
    spatial_width: float,
    bump_width: float,
    spacing: float = 1.0,
) -> SeparableKernel:
    """Narrow kernel concentrated at the group element [0, center]."""
    term = KernelTerm(
        k1=gaussian_grid(spatial_width, spacing),
        k2=GaussianBump(center=center, width=bump_width),
    )
    return SeparableKernel(terms=[term], name="delta")


def select_kernels(bank: typing.List[SeparableKernel], name: typing.Optional[str]) -> typing.List[SeparableKernel]:
    """Kernels of the bank matching name, or the whole bank when name is unset.

    Raises:
        KeyError: if no kernel has that name.
    """
    if name is None:
        return bank
    chosen = [kernel for kernel in bank if kernel.name == name]
    if not chosen:
        raise KeyError(f"No kernel named {name!r}; available: {', '.join(k.name for k in bank)}.")
    return chosen
