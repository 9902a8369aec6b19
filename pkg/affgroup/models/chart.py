"""Quadrature charts for the Haar measures of G₁, GL₂(ℝ) and G₂.

GL₂(ℝ) is covered through the Iwasawa coordinates with the substitutions
s + it = e^ρ·e^{iθ} and v = ±e^w, under which ds dt/(s² + t²) = dρ dθ and dv/|v| = dw.
"""
import enum
import math
import typing

import numpy as np
import pydantic


__all__ = ["AxisKind", "ChartAxis", "QuadratureChart", "G1Chart"]


class AxisKind(enum.Enum):
    """How an axis parametrizes its chart coordinate."""

    LINEAR = "linear"
    """The coordinate itself."""

    LOG_RADIAL = "log-radial"
    """Log-radius ρ of s + it."""

    LOG_SIGNED = "log-signed"
    """Log-magnitude w of a coordinate ±e^w; both sign branches are carried by the chart."""


class ChartAxis(pydantic.BaseModel):
    """A uniformly subdivided interval integrated with the midpoint rule."""

    model_config = pydantic.ConfigDict(frozen=True)

    kind: AxisKind = AxisKind.LINEAR
    lo: float
    hi: float
    count: int = pydantic.Field(ge=1)

    @pydantic.model_validator(mode="after")
    def __check_bounds(self) -> "ChartAxis":
        if not self.lo < self.hi:
            raise ValueError(f"Axis bounds must satisfy lo < hi, got [{self.lo}, {self.hi}].")
        return self

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / self.count

    @property
    def measure(self) -> float:
        return self.hi - self.lo

    def nodes(self) -> np.ndarray:
        """Cell midpoints."""
        return self.lo + self.step * (np.arange(self.count) + 0.5)

    def refined(self, factor: float) -> "ChartAxis":
        """Same interval with the node count scaled by factor (at least one node)."""
        return self.model_copy(update={"count": max(1, int(round(self.count * factor)))})


class QuadratureChart(pydantic.BaseModel):
    """Product chart (ρ, θ, u, w, sign) realizing dμ_GL₂ = dρ dθ du dw.

    Nodes are ordered C-style over (ρ, θ, u, w, sign).
    """

    model_config = pydantic.ConfigDict(frozen=True)

    rho: ChartAxis = ChartAxis(kind=AxisKind.LOG_RADIAL, lo=-4.0, hi=4.0, count=32)
    """Log-radius of the K₀ factor."""

    theta: ChartAxis = ChartAxis(lo=0.0, hi=2.0 * math.pi, count=32)
    """Angle of the K₀ factor."""

    u: ChartAxis = ChartAxis(lo=-8.0, hi=8.0, count=64)
    """Shear of the H₍₁,₀₎ factor."""

    w: ChartAxis = ChartAxis(kind=AxisKind.LOG_SIGNED, lo=-4.0, hi=4.0, count=32)
    """Log-magnitude of v in the H₍₁,₀₎ factor."""

    signs: typing.Tuple[int, ...] = (1, -1)
    """Sign branches of v."""

    @pydantic.field_validator("signs")
    @classmethod
    def __check_signs(cls, v: typing.Tuple[int, ...]) -> typing.Tuple[int, ...]:
        if not v or any(s not in (1, -1) for s in v) or len(set(v)) != len(v):
            raise ValueError(f"Signs must be a non-empty subset of (1, -1), got {v}.")
        return v

    @property
    def shape(self) -> typing.Tuple[int, int, int, int, int]:
        return (self.rho.count, self.theta.count, self.u.count, self.w.count, len(self.signs))

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def cell_weight(self) -> float:
        """Weight dρ·dθ·du·dw shared by every node."""
        return self.rho.step * self.theta.step * self.u.step * self.w.step

    @property
    def total_measure(self) -> float:
        """Haar measure of the truncated chart."""
        return self.rho.measure * self.theta.measure * self.u.measure * self.w.measure * len(self.signs)

    @property
    def is_periodic_theta(self) -> bool:
        return math.isclose(self.theta.measure, 2.0 * math.pi)

    def refined(self, factor: float) -> "QuadratureChart":
        """Chart with every node count scaled by factor."""
        return self.model_copy(update={
            "rho": self.rho.refined(factor),
            "theta": self.theta.refined(factor),
            "u": self.u.refined(factor),
            "w": self.w.refined(factor),
        })


class G1Chart(pydantic.BaseModel):
    """Chart (y, w, sign) for G₁ = ℝ ⋊ ℝ*, with b = ±e^w."""

    model_config = pydantic.ConfigDict(frozen=True)

    y: ChartAxis = ChartAxis(lo=-8.0, hi=8.0, count=128)
    w: ChartAxis = ChartAxis(kind=AxisKind.LOG_SIGNED, lo=-10.0, hi=4.0, count=160)
