"""Affine group arithmetic and the Iwasawa chart of GL₂(ℝ)."""
import typing

import numpy as np

from ..errors import InvalidChartPoint, SingularMatrix
from ..models.group import DET_EPSILON, AffineElement, IwasawaFactors, Mat2


__all__ = [
    "compose",
    "invert",
    "apply",
    "iwasawa",
    "from_chart",
    "invert_mat",
    "matmul",
    "matrices_from_chart",
    "chart_from_matrices",
    "batch_det",
    "batch_inverse",
]


def matmul(m: Mat2, n: Mat2) -> Mat2:
    return Mat2(
        a=m.a * n.a + m.b * n.c,
        b=m.a * n.b + m.b * n.d,
        c=m.c * n.a + m.d * n.c,
        d=m.c * n.b + m.d * n.d,
    )


def invert_mat(m: Mat2, det_epsilon: float = DET_EPSILON) -> Mat2:
    """Inverse of a 2×2 matrix.

    Raises:
        SingularMatrix: if |det m| ≤ det_epsilon.
    """
    det = m.det
    if not abs(det) > det_epsilon:
        raise SingularMatrix(f"Matrix {m.to_array().tolist()} has |det| = {abs(det):.3e}.")
    return Mat2(a=m.d / det, b=-m.b / det, c=-m.c / det, d=m.a / det)


def _mat_vec(m: Mat2, z: typing.Sequence[float]) -> typing.Tuple[float, float]:
    return (m.a * z[0] + m.b * z[1], m.c * z[0] + m.d * z[1])


def compose(g: AffineElement, h: AffineElement) -> AffineElement:
    """Product [x, A][y, B] = [x + A·y, A·B]."""
    ay = _mat_vec(g.A, h.x)
    return AffineElement(x=(g.x[0] + ay[0], g.x[1] + ay[1]), A=matmul(g.A, h.A))


def invert(g: AffineElement, det_epsilon: float = DET_EPSILON) -> AffineElement:
    """Inverse [x, A]⁻¹ = [−A⁻¹x, A⁻¹].

    Raises:
        SingularMatrix: if |det A| ≤ det_epsilon.
    """
    a_inv = invert_mat(g.A, det_epsilon)
    y = _mat_vec(a_inv, g.x)
    return AffineElement(x=(-y[0], -y[1]), A=a_inv)


def apply(g: AffineElement, z: typing.Any) -> np.ndarray:
    """Act on points: z ↦ x + A·z. Accepts a single point or an array of shape (..., 2)."""
    z = np.asarray(z, dtype=float)
    return np.asarray(g.x) + z @ g.A.to_array().T


def iwasawa(m: Mat2, det_epsilon: float = DET_EPSILON) -> IwasawaFactors:
    """Unique factorization m = M·C with M ∈ K₀ and C ∈ H₍₁,₀₎.

    Raises:
        SingularMatrix: if |det m| ≤ det_epsilon.
    """
    det = m.det
    if not abs(det) > det_epsilon:
        raise SingularMatrix(f"Matrix {m.to_array().tolist()} has |det| = {abs(det):.3e}.")
    norm = m.b * m.b + m.d * m.d
    return IwasawaFactors(
        s=m.d * det / norm,
        t=-m.b * det / norm,
        u=(m.c * m.d + m.a * m.b) / det,
        v=norm / det,
    )


def from_chart(s: float, t: float, u: float, v: float) -> Mat2:
    """Matrix M·C for chart coordinates (s, t, u, v).

    Raises:
        InvalidChartPoint: if s² + t² = 0 or v = 0.
    """
    if s * s + t * t <= 0.0 or v == 0.0:
        raise InvalidChartPoint(f"({s}, {t}, {u}, {v}) is not a chart point.")
    return Mat2(a=s - u * t, b=-t * v, c=t + u * s, d=s * v)


def matrices_from_chart(s: np.ndarray, t: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Vectorized `from_chart`; returns an array of shape (..., 2, 2)."""
    out = np.empty(np.broadcast(s, t, u, v).shape + (2, 2))
    out[..., 0, 0] = s - u * t
    out[..., 0, 1] = -t * v
    out[..., 1, 0] = t + u * s
    out[..., 1, 1] = s * v
    return out


def chart_from_matrices(m: np.ndarray) -> typing.Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized `iwasawa` for arrays of shape (..., 2, 2). Singular entries produce inf/nan."""
    a, b, c, d = m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1]
    det = a * d - b * c
    norm = b * b + d * d
    with np.errstate(divide="ignore", invalid="ignore"):
        return d * det / norm, -b * det / norm, (c * d + a * b) / det, norm / det


def batch_det(m: np.ndarray) -> np.ndarray:
    return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


def batch_inverse(m: np.ndarray, det_epsilon: float = DET_EPSILON) -> np.ndarray:
    """Inverse of a stack of 2×2 matrices.

    Raises:
        SingularMatrix: if any |det| ≤ det_epsilon.
    """
    det = batch_det(m)
    if np.any(~(np.abs(det) > det_epsilon)):
        raise SingularMatrix("Stack contains a singular matrix.")
    out = np.empty_like(m)
    out[..., 0, 0] = m[..., 1, 1] / det
    out[..., 0, 1] = -m[..., 0, 1] / det
    out[..., 1, 0] = -m[..., 1, 0] / det
    out[..., 1, 1] = m[..., 0, 0] / det
    return out
