"""Elements of the affine group G₂ = ℝ² ⋊ GL₂(ℝ)."""
import math
import typing

import numpy as np
import pydantic


__all__ = ["DET_EPSILON", "RECONSTRUCT_TOL", "Mat2", "AffineElement", "IwasawaFactors"]


DET_EPSILON = 1e-9
"""Matrices with |det| at or below this value are treated as singular."""

RECONSTRUCT_TOL = 1e-10
"""Relative Frobenius tolerance for factorization round-trips."""


class Mat2(pydantic.BaseModel):
    """A real 2×2 matrix stored by value, row-major."""

    model_config = pydantic.ConfigDict(frozen=True)

    a: float
    """Top-left entry."""

    b: float
    """Top-right entry."""

    c: float
    """Bottom-left entry."""

    d: float
    """Bottom-right entry."""

    @property
    def det(self) -> float:
        """Determinant `a·d − b·c`."""
        return self.a * self.d - self.b * self.c

    def to_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)

    @classmethod
    def from_array(cls, array: typing.Any) -> "Mat2":
        """Build a matrix from anything numpy reads as a 2×2 array."""
        m = np.asarray(array, dtype=float).reshape(2, 2)
        return cls(a=m[0, 0], b=m[0, 1], c=m[1, 0], d=m[1, 1])

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(a=1.0, b=0.0, c=0.0, d=1.0)

    @classmethod
    def rotation(cls, theta: float) -> "Mat2":
        """Rotation R_θ = [[cos θ, −sin θ], [sin θ, cos θ]]."""
        return cls(a=math.cos(theta), b=-math.sin(theta), c=math.sin(theta), d=math.cos(theta))

    @classmethod
    def scaling(cls, factor: float) -> "Mat2":
        return cls(a=factor, b=0.0, c=0.0, d=factor)


class AffineElement(pydantic.BaseModel):
    """Group element [x, A] acting on the plane by z ↦ x + A·z."""

    model_config = pydantic.ConfigDict(frozen=True)

    x: typing.Tuple[float, float] = (0.0, 0.0)
    """Translation, in signal-domain units."""

    A: Mat2 = pydantic.Field(default_factory=Mat2.identity)
    """Linear part."""

    @classmethod
    def identity(cls) -> "AffineElement":
        return cls()

    @classmethod
    def translation(cls, x: typing.Sequence[float]) -> "AffineElement":
        return cls(x=(float(x[0]), float(x[1])))

    def to_json(self) -> typing.Dict[str, typing.Any]:
        """Serialized form `{x: [..], A: [[..], [..]]}` used in reports."""
        return {"x": list(self.x), "A": self.A.to_array().tolist()}


class IwasawaFactors(pydantic.BaseModel):
    """Coordinates (s, t, u, v) of GL₂(ℝ) = K₀·H₍₁,₀₎.

    The K₀ factor is M = [[s, −t], [t, s]], the H₍₁,₀₎ factor is C = [[1, 0], [u, v]].
    """

    model_config = pydantic.ConfigDict(frozen=True)

    s: float
    t: float
    u: float
    v: float

    @property
    def M(self) -> Mat2:
        return Mat2(a=self.s, b=-self.t, c=self.t, d=self.s)

    @property
    def C(self) -> Mat2:
        return Mat2(a=1.0, b=0.0, c=self.u, d=self.v)

    @property
    def rho(self) -> float:
        """Log-radius of s + it."""
        return 0.5 * math.log(self.s * self.s + self.t * self.t)

    @property
    def theta(self) -> float:
        """Angle of s + it, in [0, 2π)."""
        return math.atan2(self.t, self.s) % (2.0 * math.pi)

    @property
    def w(self) -> float:
        """Log-magnitude of v."""
        return math.log(abs(self.v))

    @property
    def sign(self) -> int:
        return 1 if self.v > 0 else -1
