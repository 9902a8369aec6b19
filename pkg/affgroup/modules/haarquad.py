"""Haar-measure quadrature on G₁, GL₂(ℝ) and G₂.

GL₂(ℝ) integrals use the Iwasawa factorization A = M·C,

    ∫ f dμ_GL₂ = ∫_K₀ ∫_H f(M·C)·|det C| dμ_H dμ_K₀,

with dμ_K₀ = ds dt/(s² + t²) and dμ_H = du dv/v². The substitutions s + it = e^ρ·e^{iθ} and
v = ±e^w absorb both singular denominators, leaving the midpoint rule in (ρ, θ, u, w).
G₂ integrals nest a spatial Lebesgue integral divided by |det A| inside the GL₂ one.
"""
import functools
import logging
import typing
import warnings

import numpy as np

from ..errors import ChartTooSmall, NonFiniteSample
from ..models.chart import G1Chart, QuadratureChart
from ..models.grid import GridGeometry
from ..models.group import DET_EPSILON
from ..models.lifted import LiftedSignal
from .affine import batch_det, chart_from_matrices, matrices_from_chart
from .workers import map_chunks


__all__ = [
    "ChartNodes",
    "check_finite",
    "chart_nodes",
    "nearest_nodes",
    "integrate_g1",
    "integrate_gl2",
    "integrate_g2",
    "integrate_lifted",
    "lifted_l1",
    "oracle_gl2",
]


logger = logging.getLogger(__name__)

BOUNDARY_MASS_TOL = 1e-3


class ChartNodes(typing.NamedTuple):
    """Coordinates and weights of a range of chart nodes."""

    index: np.ndarray
    rho: np.ndarray
    theta: np.ndarray
    u: np.ndarray
    w: np.ndarray
    sign: np.ndarray
    s: np.ndarray
    t: np.ndarray
    v: np.ndarray
    matrices: np.ndarray
    """Group elements M·C, shape (n, 2, 2)."""

    weight: np.ndarray
    """Haar weight dρ·dθ·du·dw of each node."""

    stabilizer_weight: np.ndarray
    """Weight of dμ_K₀·dμ_H = ds dt/(s² + t²)·du dv/v², i.e. `weight / |v|`."""

    boundary: np.ndarray
    """Whether the node lies in an outermost cell of a truncated axis."""


def check_finite(func: typing.Callable[..., np.ndarray]) -> typing.Callable[..., np.ndarray]:
    """Decorator raising NonFiniteSample when an integrand returns NaN or infinity."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        values = np.asarray(func(*args, **kwargs), dtype=float)
        if not np.all(np.isfinite(values)):
            raise NonFiniteSample(f"Integrand {getattr(func, '__name__', func)!r} returned non-finite values.")
        return values
    return wrapper


def chart_nodes(chart: QuadratureChart, start: int = 0, stop: typing.Optional[int] = None) -> ChartNodes:
    """Nodes [start, stop) of a chart, in C-order over (ρ, θ, u, w, sign)."""
    if start == 0 and (stop is None or stop >= chart.size):
        return _all_nodes(chart)
    return _nodes(chart, start, chart.size if stop is None else min(stop, chart.size))


@functools.lru_cache(maxsize=8)
def _all_nodes(chart: QuadratureChart) -> ChartNodes:
    return _nodes(chart, 0, chart.size)


def _nodes(chart: QuadratureChart, start: int, stop: int) -> ChartNodes:
    index = np.arange(start, stop)
    ir, it, iu, iw, isg = np.unravel_index(index, chart.shape)
    rho = chart.rho.nodes()[ir]
    theta = chart.theta.nodes()[it]
    u = chart.u.nodes()[iu]
    w = chart.w.nodes()[iw]
    sign = np.asarray(chart.signs, dtype=float)[isg]
    radius = np.exp(rho)
    s = radius * np.cos(theta)
    t = radius * np.sin(theta)
    v = sign * np.exp(w)
    weight = np.full(index.shape, chart.cell_weight)

    boundary = np.zeros(index.shape, dtype=bool)
    for axis_index, axis in ((ir, chart.rho), (iu, chart.u), (iw, chart.w)):
        boundary |= (axis_index == 0) | (axis_index == axis.count - 1)
    if not chart.is_periodic_theta:
        boundary |= (it == 0) | (it == chart.theta.count - 1)

    return ChartNodes(
        index=index, rho=rho, theta=theta, u=u, w=w, sign=sign, s=s, t=t, v=v,
        matrices=matrices_from_chart(s, t, u, v),
        weight=weight,
        stabilizer_weight=weight / np.abs(v),
        boundary=boundary,
    )


def nearest_nodes(chart: QuadratureChart, matrices: np.ndarray) -> typing.Tuple[np.ndarray, np.ndarray]:
    """Chart node whose cell contains each matrix, and whether the matrix lies in the chart.

    Args:
        chart (QuadratureChart): The chart.
        matrices (np.ndarray): Matrices of shape (n, 2, 2).

    Returns:
        Node indices (clipped into range) and a validity mask, both of shape (n,).
    """
    s, t, u, v = chart_from_matrices(np.asarray(matrices, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = 0.5 * np.log(s * s + t * t)
        w = np.log(np.abs(v))
        theta = np.mod(np.arctan2(t, s) - chart.theta.lo, 2.0 * np.pi)

    valid = np.isfinite(rho) & np.isfinite(u) & np.isfinite(w) & (theta < chart.theta.measure)
    cells = []
    for value, axis, lo in (
        (rho, chart.rho, chart.rho.lo),
        (theta, chart.theta, 0.0),
        (u, chart.u, chart.u.lo),
        (w, chart.w, chart.w.lo),
    ):
        cell = np.floor((np.nan_to_num(value, nan=-np.inf) - lo) / axis.step)
        valid &= (cell >= 0) & (cell < axis.count)
        cells.append(np.clip(np.nan_to_num(cell), 0, axis.count - 1).astype(int))

    sign = np.where(v > 0, 1, -1)
    branch = np.zeros(sign.shape, dtype=int)
    present = np.zeros(sign.shape, dtype=bool)
    for position, value in enumerate(chart.signs):
        branch = np.where(sign == value, position, branch)
        present |= sign == value
    cells.append(branch)
    return np.ravel_multi_index(cells, chart.shape), valid & present


def _reduce(
    chart: QuadratureChart,
    fiber: typing.Callable[[ChartNodes], np.ndarray],
    chunk: int,
    boundary_mass_tol: float,
) -> float:
    """Σ fiber(node)·|det C|·dμ_H·dμ_K₀ over the chart, with the truncation check."""
    def partial(start: int, stop: int) -> typing.Tuple[float, float, float]:
        nodes = chart_nodes(chart, start, stop)
        contributions = fiber(nodes) * np.abs(nodes.v) * nodes.stabilizer_weight
        magnitude = np.abs(contributions)
        return float(contributions.sum()), float(magnitude.sum()), float(magnitude[nodes.boundary].sum())

    parts = np.asarray(map_chunks(partial, chart.size, chunk))
    total, mass, boundary = np.sum(parts, axis=0)
    if mass > 0.0 and boundary > boundary_mass_tol * mass:
        warnings.warn(
            ChartTooSmall(f"{boundary / mass:.2e} of the integrand mass lies on the chart boundary."),
            stacklevel=3,
        )
    return float(total)


def integrate_g1(
    f: typing.Callable[[np.ndarray, np.ndarray], np.ndarray],
    chart: typing.Optional[G1Chart] = None,
) -> float:
    """∫_G₁ f dμ_G₁ = ∫∫ f[y, b] dy db / b², with b = ±e^w so that db/b² = e^{−w} dw.

    Args:
        f (typing.Callable): Vectorized integrand f(y, b) over equally shaped arrays.
        chart (typing.Optional[G1Chart]): Truncation and node counts.
    """
    chart = chart or G1Chart()
    integrand = check_finite(f)
    y, w = np.meshgrid(chart.y.nodes(), chart.w.nodes(), indexing="ij")
    scale = np.exp(-w) * chart.y.step * chart.w.step
    branches = [np.sum(integrand(y, sign * np.exp(w)) * scale) for sign in (1.0, -1.0)]
    return float(np.sum(branches))


def integrate_gl2(
    f: typing.Callable[[np.ndarray], np.ndarray],
    chart: typing.Optional[QuadratureChart] = None,
    *,
    chunk: int = 1 << 16,
    boundary_mass_tol: float = BOUNDARY_MASS_TOL,
) -> float:
    """∫_GL₂ f dμ_GL₂ over a truncated chart.

    Args:
        f (typing.Callable): Vectorized integrand over matrix stacks of shape (n, 2, 2).
        chart (typing.Optional[QuadratureChart]): Chart, the default one when omitted.
        chunk (int): Nodes evaluated per work item.
        boundary_mass_tol (float): Boundary mass fraction that triggers ChartTooSmall.
    """
    chart = chart or QuadratureChart()
    integrand = check_finite(f)
    return _reduce(chart, lambda nodes: integrand(nodes.matrices), chunk, boundary_mass_tol)


def integrate_g2(
    f: typing.Callable[[np.ndarray, np.ndarray], np.ndarray],
    chart: typing.Optional[QuadratureChart] = None,
    spatial: typing.Optional[GridGeometry] = None,
    *,
    boundary_mass_tol: float = BOUNDARY_MASS_TOL,
) -> float:
    """∫_G₂ f dμ_G₂ = ∫_GL₂ ∫_ℝ² f[x, A] dx / |det A| dμ_GL₂(A).

    Args:
        f (typing.Callable): Integrand f(x, A) broadcasting x of shape (1, m, 2) against
            A of shape (n, 1, 2, 2) to values of shape (n, m).
        chart (typing.Optional[QuadratureChart]): GL₂ chart.
        spatial (typing.Optional[GridGeometry]): Spatial midpoint grid.
        boundary_mass_tol (float): Boundary mass fraction that triggers ChartTooSmall.
    """
    chart = chart or QuadratureChart()
    spatial = spatial or GridGeometry.centered((64, 64), 0.25)
    integrand = check_finite(f)
    points = spatial.points().reshape(1, -1, 2)

    def fiber(nodes: ChartNodes) -> np.ndarray:
        values = integrand(points, nodes.matrices[:, None, :, :])
        return values.sum(axis=1) * spatial.spacing ** 2 / np.abs(batch_det(nodes.matrices))

    chunk = max(1, (1 << 20) // points.shape[1])
    return _reduce(chart, fiber, chunk, boundary_mass_tol)


def _lifted_sum(F: LiftedSignal, values: np.ndarray) -> float:
    nodes = chart_nodes(F.chart)
    fibers = values.reshape(values.shape[0], -1).sum(axis=1) * F.spatial.spacing ** 2
    return float(np.sum(fibers * nodes.weight / np.abs(batch_det(nodes.matrices))))


def integrate_lifted(F: LiftedSignal) -> float:
    """G₂ integral of a sampled lifted signal, same quadrature as `integrate_g2`."""
    return _lifted_sum(F, F.values)


def lifted_l1(F: LiftedSignal) -> float:
    """𝕃₁ norm over G₂ of a sampled lifted signal."""
    return _lifted_sum(F, np.abs(F.values))


def oracle_gl2(
    f: typing.Callable[[np.ndarray], np.ndarray],
    bounds: typing.Sequence[typing.Tuple[float, float]],
    counts: typing.Sequence[int],
    det_epsilon: float = DET_EPSILON,
) -> float:
    """Entry-space reference: ∫ f(A) da db dc dd / (det A)² by the 4-D midpoint rule.

    Cells whose midpoint has |det| < det_epsilon are skipped.

    Args:
        f (typing.Callable): Vectorized integrand over matrix stacks of shape (..., 2, 2).
        bounds (typing.Sequence): Intervals of the entries a, b, c, d.
        counts (typing.Sequence[int]): Midpoint nodes per entry.
        det_epsilon (float): Singular-set exclusion threshold.
    """
    integrand = check_finite(f)
    axes = []
    volume = 1.0
    for (lo, hi), count in zip(bounds, counts):
        step = (hi - lo) / count
        axes.append(lo + step * (np.arange(count) + 0.5))
        volume *= step
    b, c, d = np.meshgrid(axes[1], axes[2], axes[3], indexing="ij")

    def slab(start: int, stop: int) -> float:
        total = 0.0
        for a in axes[0][start:stop]:
            m = np.stack([np.full(b.shape, a), b, c, d], axis=-1).reshape(b.shape + (2, 2))
            det = batch_det(m)
            keep = np.abs(det) >= det_epsilon
            values = integrand(m[keep])
            total += float(np.sum(values / det[keep] ** 2))
        return total

    parts = map_chunks(slab, len(axes[0]), 1)
    return float(np.sum(parts) * volume)
