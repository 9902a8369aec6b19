"""The lifting layer from planar signals to signals on G₂.

A lifted signal is sampled at the group elements [x, h] with x on the spatial grid of the input
and h on a GL₂ chart:

    (𝒦f)([x, h]) = 1/|det h| · ∫ k(h⁻¹(x̃ − x))·f(x̃) dx̃,

evaluated as a Riemann sum over the grid of f.
"""
import logging
import math
import typing

import numpy as np
from scipy import ndimage

from ..errors import ShapeMismatch
from ..models.chart import QuadratureChart
from ..models.grid import Grid2, GridGeometry
from ..models.group import DET_EPSILON, AffineElement
from ..models.lifted import LiftedSignal, LiftSource
from .affine import batch_det, batch_inverse, invert
from .haarquad import chart_nodes, nearest_nodes
from .signal import act, norms, sample
from .workers import map_chunks


__all__ = ["lift", "lift_margin", "lift_at", "regular_action", "lift_invariance_deviation"]


logger = logging.getLogger(__name__)


def _support_radius(k: Grid2) -> float:
    """Largest distance from the physical origin to a node of k's grid."""
    corners = np.array(k.origin) + k.spacing * (np.array(k.shape) - 1)
    return float(np.max(np.abs(np.concatenate([k.origin, corners]))) * math.sqrt(2.0))


def _warped_kernel(k: Grid2, h_inv: np.ndarray, spacing: float, limit: typing.Tuple[int, int]) -> np.ndarray:
    """Weights w[di, dj] = k(h⁻¹·spacing·(di, dj)) over a symmetric lag window."""
    reach = np.linalg.norm(np.linalg.inv(h_inv), 2) * _support_radius(k) / spacing
    half = [min(int(math.ceil(reach)) + 1, n - 1) for n in limit]
    di, dj = np.meshgrid(np.arange(-half[0], half[0] + 1), np.arange(-half[1], half[1] + 1), indexing="ij")
    lags = spacing * np.stack([di, dj], axis=-1)
    return sample(k, lags @ h_inv.T)


def lift_margin(k: Grid2, chart: QuadratureChart) -> int:
    """Nodes by which a fiber of the lift reaches past its input's support at the widest chart node."""
    stretch = float(np.max(np.linalg.norm(chart_nodes(chart).matrices, ord=2, axis=(-2, -1))))
    return int(math.ceil(stretch * _support_radius(k) / k.spacing)) + 1


def lift(
    f: Grid2,
    k: Grid2,
    chart: QuadratureChart,
    spatial: typing.Optional[GridGeometry] = None,
    *,
    det_epsilon: float = DET_EPSILON,
) -> LiftedSignal:
    """Lift f to G₂ with kernel k, sampled on f's grid times the chart nodes.

    Args:
        f (Grid2): Input signal.
        k (Grid2): Lifting kernel, compactly supported on its grid.
        chart (QuadratureChart): GL₂ chart of the lifted signal.
        spatial (typing.Optional[GridGeometry]): Spatial chart; must be f's own geometry.
        det_epsilon (float): Singularity threshold for the chart matrices.

    Raises:
        ShapeMismatch: if spatial differs from f's geometry.
        SingularMatrix: if a chart node is singular.
    """
    if spatial is not None and spatial != f.geometry:
        raise ShapeMismatch(f"Spatial chart {spatial} differs from the input grid {f.geometry}.")
    nodes = chart_nodes(chart)
    inverses = batch_inverse(nodes.matrices, det_epsilon)
    scale = f.spacing ** 2 / np.abs(batch_det(nodes.matrices))
    logger.debug("Lifting %s grid over %d chart nodes.", f.shape, chart.size)

    def fibers(start: int, stop: int) -> np.ndarray:
        out = np.empty((stop - start,) + f.shape)
        for n in range(start, stop):
            weights = _warped_kernel(k, inverses[n], f.spacing, f.shape)
            out[n - start] = scale[n] * ndimage.correlate(f.values, weights, mode="constant", cval=0.0)
        return out

    values = np.concatenate(map_chunks(fibers, chart.size, 16), axis=0)
    return LiftedSignal(
        values=values,
        chart=chart,
        spatial=f.geometry,
        source=LiftSource(image=f, kernel=k),
    )


def _lift_points(f: Grid2, k: Grid2, xs: np.ndarray, matrices: np.ndarray, det_epsilon: float) -> np.ndarray:
    points = f.geometry.points().reshape(-1, 2)
    inverses = batch_inverse(matrices, det_epsilon)
    scale = f.spacing ** 2 / np.abs(batch_det(matrices))
    flat = f.values.reshape(-1)
    out = np.empty(len(xs))
    for n in range(len(xs)):
        arguments = (points - xs[n]) @ inverses[n].T
        out[n] = scale[n] * np.dot(sample(k, arguments), flat)
    return out


def lift_at(
    f: Grid2,
    k: Grid2,
    elements: typing.Sequence[AffineElement],
    *,
    det_epsilon: float = DET_EPSILON,
) -> np.ndarray:
    """Evaluate the lifting layer at arbitrary group elements by direct summation.

    Raises:
        SingularMatrix: if an element is singular.
    """
    xs = np.array([g.x for g in elements], dtype=float).reshape(-1, 2)
    matrices = np.array([g.A.to_array() for g in elements]).reshape(-1, 2, 2)
    return _lift_points(f, k, xs, matrices, det_epsilon)


def regular_action(F: LiftedSignal, g: AffineElement, *, det_epsilon: float = DET_EPSILON) -> LiftedSignal:
    """(ρ(g)F)(g′) = F(g⁻¹g′) on F's charts.

    When F carries its source image and kernel, the result is the lift of ρ(g)f, which equals
    ρ(g)𝒦f. Otherwise fibers are interpolated: bilinearly in space and from the chart node
    containing A_g⁻¹A in the group, zero outside the chart.

    Raises:
        SingularMatrix: if g is not invertible.
    """
    if F.source is not None:
        return lift(act(g, F.source.image, det_epsilon), F.source.kernel, F.chart, det_epsilon=det_epsilon)

    g_inv = invert(g, det_epsilon)
    nodes = chart_nodes(F.chart)
    targets = np.einsum("ij,njk->nik", g_inv.A.to_array(), nodes.matrices)
    index, valid = nearest_nodes(F.chart, targets)
    points = F.spatial.points()
    source = np.asarray(g_inv.x) + points @ g_inv.A.to_array().T
    values = np.zeros(F.values.shape)
    for n in np.flatnonzero(valid):
        values[n] = sample(F.fiber(index[n]), source)
    return F.with_values(values)


def lift_invariance_deviation(
    f1: Grid2,
    f2: Grid2,
    g: AffineElement,
    k: Grid2,
    chart: QuadratureChart,
    *,
    det_epsilon: float = DET_EPSILON,
) -> typing.Tuple[float, float]:
    """Both sides of the lifting invariance bound sup|𝒦f₁ − ρ(g⁻¹)𝒦f₂| ≤ ε̂·‖k‖₁.

    ρ(g⁻¹)𝒦f₂ is evaluated exactly as g′ ↦ (𝒦f₂)(g·g′) at every node g′ of the lift of f₁.
    ε̂ = sup|f₁ − ρ(g⁻¹)f₂| on the spatial grid.

    Returns:
        The measured deviation and the bound.

    Raises:
        ShapeMismatch: if f₁ and f₂ live on different grids.
    """
    if f1.geometry != f2.geometry:
        raise ShapeMismatch(f"Grids {f1.geometry} and {f2.geometry} differ.")
    lifted = lift(f1, k, chart, det_epsilon=det_epsilon)

    nodes = chart_nodes(chart)
    points = f1.geometry.points().reshape(-1, 2)
    count = len(points)
    xs = np.tile(points, (chart.size, 1))
    matrices = np.repeat(nodes.matrices, count, axis=0)
    shifted_x = np.asarray(g.x) + xs @ g.A.to_array().T
    shifted_m = np.einsum("ij,njk->nik", g.A.to_array(), matrices)

    def block(start: int, stop: int) -> np.ndarray:
        return _lift_points(f2, k, shifted_x[start:stop], shifted_m[start:stop], det_epsilon)

    moved = np.concatenate(map_chunks(block, len(xs), 4 * count)).reshape(lifted.values.shape)
    lhs = float(np.max(np.abs(lifted.values - moved)))

    epsilon_hat = norms(f1.with_values(f1.values - act(invert(g, det_epsilon), f2).values))[1]
    return lhs, epsilon_hat * norms(k)[0]
