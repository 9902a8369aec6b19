"""Signals on G₂ sampled on a product chart."""
import typing

import numpy as np
import pydantic

from .chart import QuadratureChart
from .grid import Grid2, GridGeometry


__all__ = ["LiftSource", "LiftedSignal", "LiftedHeader"]


class LiftSource(pydantic.BaseModel):
    """The planar signal and lifting kernel a lifted signal was produced from."""

    model_config = pydantic.ConfigDict(frozen=True)

    image: Grid2
    kernel: Grid2


class LiftedSignal(pydantic.BaseModel):
    """Samples F([x, A]) over (group chart nodes) × (spatial grid nodes).

    `values[n, i, j]` is the sample at group node n (C-order over ρ, θ, u, w, sign) and
    spatial node (i, j).
    """

    model_config = pydantic.ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray
    """Samples, shape (chart.size, H, W)."""

    chart: QuadratureChart
    """Group chart of the GL₂ fibers."""

    spatial: GridGeometry
    """Spatial grid of the translations."""

    source: typing.Optional[LiftSource] = None
    """Origin of the samples when they come from the lifting layer. Not serialized."""

    @pydantic.field_validator("values", mode="before")
    @classmethod
    def __to_array(cls, v: typing.Any) -> np.ndarray:
        array = np.array(v, dtype=float)
        if array.ndim != 3:
            raise ValueError(f"Lifted values must be 3-D, got shape {array.shape}.")
        if not np.all(np.isfinite(array)):
            raise ValueError("Lifted values must be finite.")
        array.setflags(write=False)
        return array

    @pydantic.model_validator(mode="after")
    def __check_shape(self) -> "LiftedSignal":
        expected = (self.chart.size,) + tuple(self.spatial.shape)
        if self.values.shape != expected:
            raise ValueError(f"Lifted values have shape {self.values.shape}, charts require {expected}.")
        return self

    def fiber(self, index: int) -> Grid2:
        """Spatial signal x ↦ F([x, A]) at group node index."""
        return Grid2.on(self.spatial, self.values[index])

    def with_values(self, values: np.ndarray) -> "LiftedSignal":
        """Same charts, new samples (the source is dropped)."""
        return LiftedSignal(values=values, chart=self.chart, spatial=self.spatial)

    def __add__(self, other: "LiftedSignal") -> "LiftedSignal":
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "LiftedSignal") -> "LiftedSignal":
        return self.with_values(self.values - other.values)

    def __mul__(self, factor: float) -> "LiftedSignal":
        return self.with_values(self.values * factor)

    __rmul__ = __mul__


class LiftedHeader(pydantic.BaseModel):
    """Text header of the lifted-signal binary format."""

    format: str = "affgroup-lifted/1"
    axes: typing.List[str] = ["rho", "theta", "u", "w", "sign", "x-row", "x-col"]
    shape: typing.List[int]
    dtype: str = "<f8"
    chart: QuadratureChart
    spatial: GridGeometry
