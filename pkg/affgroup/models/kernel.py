"""Separable kernels k([y, A]) = Σᵢ k₁ᵢ(y)·k₂ᵢ(A) on G₂."""
import typing

import numpy as np
import pydantic

from .grid import Grid2, Spectrum2
from .group import Mat2


__all__ = ["GaussianBump", "KernelTerm", "SeparableKernel"]


class GaussianBump(pydantic.BaseModel):
    """Matrix factor k₂(A) = scale·exp(−‖A − center‖²_F / width²)."""

    model_config = pydantic.ConfigDict(frozen=True)

    center: Mat2 = pydantic.Field(default_factory=Mat2.identity)
    width: float = pydantic.Field(default=0.5, gt=0.0)
    scale: float = 1.0

    def __call__(self, matrices: np.ndarray) -> np.ndarray:
        """Evaluate on a stack of matrices of shape (..., 2, 2)."""
        diff = np.asarray(matrices, dtype=float) - self.center.to_array()
        return self.scale * np.exp(-np.sum(diff * diff, axis=(-2, -1)) / self.width ** 2)


class KernelTerm(pydantic.BaseModel):
    """One separable term k₁(y)·k₂(A)."""

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k1: Grid2
    """Spatial factor, sampled on a grid centered at the physical origin."""

    k2: GaussianBump
    """Matrix factor."""

    _spectra: typing.Dict[typing.Tuple[int, int, float], Spectrum2] = pydantic.PrivateAttr(default_factory=dict)
    """Transforms of k1 embedded on padded grids, keyed by (rows, cols, spacing)."""

    def scaled(self, factor: float) -> "KernelTerm":
        return KernelTerm(k1=self.k1.with_values(self.k1.values * factor), k2=self.k2)


class SeparableKernel(pydantic.BaseModel):
    """A finite sum of separable terms."""

    model_config = pydantic.ConfigDict(frozen=True)

    terms: typing.List[KernelTerm]
    """Separable terms of the kernel."""

    name: str = "kernel"
    """Label used in reports."""

    def scaled(self, factor: float) -> "SeparableKernel":
        return SeparableKernel(terms=[t.scaled(factor) for t in self.terms], name=self.name)

    def __add__(self, other: "SeparableKernel") -> "SeparableKernel":
        return SeparableKernel(terms=self.terms + other.terms, name=f"{self.name}+{other.name}")
