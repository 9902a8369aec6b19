"""Sampled planar signals and their spectra.

A grid node with index (i, j) sits at the physical point `origin + spacing·(i, j)`: the first
coordinate runs along rows, the second along columns. Signals are zero outside the grid.
"""
import typing

import numpy as np
import pydantic


__all__ = ["GridGeometry", "Grid2", "Spectrum2"]


class GridGeometry(pydantic.BaseModel):
    """Shape, origin and spacing of a regular planar grid."""

    model_config = pydantic.ConfigDict(frozen=True)

    shape: typing.Tuple[int, int]
    """Number of rows and columns."""

    origin: typing.Tuple[float, float] = (0.0, 0.0)
    """Physical position of node (0, 0)."""

    spacing: float = pydantic.Field(default=1.0, gt=0.0)
    """Uniform node spacing on both axes."""

    @pydantic.field_validator("shape")
    @classmethod
    def __check_shape(cls, v: typing.Tuple[int, int]) -> typing.Tuple[int, int]:
        if v[0] < 1 or v[1] < 1:
            raise ValueError(f"Grid shape must be at least 1×1, got {v}.")
        return v

    @classmethod
    def centered(cls, shape: typing.Tuple[int, int], spacing: float = 1.0) -> "GridGeometry":
        """Geometry whose node (n//2, m//2) sits at the physical origin."""
        return cls(
            shape=shape,
            origin=(-(shape[0] // 2) * spacing, -(shape[1] // 2) * spacing),
            spacing=spacing,
        )

    def points(self) -> np.ndarray:
        """Physical coordinates of all nodes, shape (H, W, 2)."""
        i, j = np.meshgrid(np.arange(self.shape[0]), np.arange(self.shape[1]), indexing="ij")
        return np.stack(
            [self.origin[0] + self.spacing * i, self.origin[1] + self.spacing * j], axis=-1
        )

    def to_index(self, points: np.ndarray) -> np.ndarray:
        """Fractional grid indices of physical points, shape (..., 2)."""
        return (np.asarray(points, dtype=float) - np.asarray(self.origin)) / self.spacing


class Grid2(pydantic.BaseModel):
    """A real signal f: ℝ² → ℝ sampled on a regular grid."""

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray
    """Samples, shape (H, W)."""

    origin: typing.Tuple[float, float] = (0.0, 0.0)
    """Physical position of sample (0, 0)."""

    spacing: float = pydantic.Field(default=1.0, gt=0.0)
    """Uniform sample spacing on both axes."""

    @pydantic.field_validator("values", mode="before")
    @classmethod
    def __to_array(cls, v: typing.Any) -> np.ndarray:
        """Copy into a read-only float array and check it."""
        array = np.array(v, dtype=float)
        if array.ndim != 2 or array.size == 0:
            raise ValueError(f"Grid values must be a non-empty 2-D array, got shape {array.shape}.")
        if not np.all(np.isfinite(array)):
            raise ValueError("Grid values must be finite.")
        array.setflags(write=False)
        return array

    @property
    def shape(self) -> typing.Tuple[int, int]:
        return self.values.shape

    @property
    def geometry(self) -> GridGeometry:
        return GridGeometry(shape=self.shape, origin=self.origin, spacing=self.spacing)

    def with_values(self, values: np.ndarray) -> "Grid2":
        """Same geometry, new samples."""
        return Grid2(values=values, origin=self.origin, spacing=self.spacing)

    @classmethod
    def on(cls, geometry: GridGeometry, values: typing.Optional[np.ndarray] = None) -> "Grid2":
        """Grid with the given geometry, zero unless values are supplied."""
        if values is None:
            values = np.zeros(geometry.shape)
        return cls(values=values, origin=geometry.origin, spacing=geometry.spacing)

    @classmethod
    def centered(cls, values: typing.Any, spacing: float = 1.0) -> "Grid2":
        """Grid whose sample (H//2, W//2) sits at the physical origin."""
        values = np.asarray(values, dtype=float)
        return cls.on(GridGeometry.centered(values.shape, spacing), values)


class Spectrum2(pydantic.BaseModel):
    """Continuous-Fourier-transform samples of a Grid2.

    Values are stored in numpy FFT order. The frequency of bin (k, l) is
    `(fftfreq(H, spacing)[k], fftfreq(W, spacing)[l])`. The transform convention is
    F(u) = ∫ f(x) e^{−i2π⟨u,x⟩} dx, approximated by a Riemann sum, so spectra of grids with
    different origins and sizes are directly comparable.
    """

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray
    """Complex samples, shape (H, W), FFT order."""

    origin: typing.Tuple[float, float] = (0.0, 0.0)
    """Origin of the spatial grid the spectrum belongs to."""

    spacing: float = pydantic.Field(default=1.0, gt=0.0)
    """Spacing of the spatial grid the spectrum belongs to."""

    @pydantic.field_validator("values", mode="before")
    @classmethod
    def __to_array(cls, v: typing.Any) -> np.ndarray:
        array = np.array(v, dtype=complex)
        if array.ndim != 2 or array.size == 0:
            raise ValueError(f"Spectrum values must be a non-empty 2-D array, got shape {array.shape}.")
        array.setflags(write=False)
        return array

    @property
    def shape(self) -> typing.Tuple[int, int]:
        return self.values.shape

    @property
    def frequency_spacing(self) -> typing.Tuple[float, float]:
        """Frequency step per axis, 1 / (N·spacing)."""
        return (1.0 / (self.shape[0] * self.spacing), 1.0 / (self.shape[1] * self.spacing))

    def frequencies(self) -> np.ndarray:
        """Frequency vectors of all bins in FFT order, shape (H, W, 2)."""
        u0 = np.fft.fftfreq(self.shape[0], self.spacing)
        u1 = np.fft.fftfreq(self.shape[1], self.spacing)
        return np.stack(np.meshgrid(u0, u1, indexing="ij"), axis=-1)

    def with_values(self, values: np.ndarray) -> "Spectrum2":
        return Spectrum2(values=values, origin=self.origin, spacing=self.spacing)
