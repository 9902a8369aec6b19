"""Group convolution over G₂ and the projection layer.

The convolution of a lifted signal F with a separable kernel k = Σ k₁·k₂ at [y, B] is

    (F*k)([y, B]) = ∫_GL₂ k₂(B⁻¹A)/|det A| · ∫_ℝ² F([x, A])·k₁(B⁻¹(x − y)) dx dμ_GL₂(A).

The inner spatial integral is a correlation with the warped kernel z ↦ k₁(−B⁻¹z). Its transform
|det B|·K₁(−Bᵀu) comes from the transform K₁ of k₁ through the affine Fourier theorem, so each
target matrix B costs one spectral resampling and one inverse transform per kernel term.
"""
import logging
import math
import typing

import numpy as np
from scipy import fft as sp_fft

from ..errors import ChartMismatch
from ..models.chart import QuadratureChart
from ..models.config import ProjectionMeasure
from ..models.grid import Grid2, GridGeometry, Spectrum2
from ..models.group import DET_EPSILON, AffineElement, Mat2
from ..models.kernel import KernelTerm, SeparableKernel
from ..models.lifted import LiftedSignal
from .affine import apply, batch_det, batch_inverse, compose, invert, invert_mat
from .haarquad import chart_nodes, nearest_nodes
from .signal import affine_spectrum, dft, dft_stack, idft_stack, norms, resample, sample
from .workers import map_chunks


__all__ = [
    "h_inner",
    "h_inner_direct",
    "gconv_at",
    "oracle_gconv_at",
    "gconv",
    "gconv_integral",
    "project",
    "kernel_l1_g2",
]


logger = logging.getLogger(__name__)


OVERSAMPLE = 4
"""Ratio of the kernel embedding size to the padded fiber size."""


class _Plan(typing.NamedTuple):
    padded: GridGeometry
    """Zero-padded fiber grid, sharing origin and spacing with the lifted signal."""

    kernel: GridGeometry
    """Centered grid k₁ is embedded on, OVERSAMPLE times larger per axis."""


def _plan(F: LiftedSignal, kern: SeparableKernel, targets: np.ndarray) -> _Plan:
    """Transform size keeping every warped kernel free of wrap-around on the fiber window."""
    spacing = F.spatial.spacing
    reach = max(float(np.max(np.linalg.norm(term.k1.geometry.points(), axis=-1))) for term in kern.terms)
    stretch = float(np.max(np.linalg.norm(targets, ord=2, axis=(-2, -1))))
    radius = int(math.ceil(stretch * reach / spacing)) + 1
    h, w = F.spatial.shape
    shape = (sp_fft.next_fast_len(2 * h + 2 * radius), sp_fft.next_fast_len(2 * w + 2 * radius))
    logger.debug("Padding fibers %s to %s for a kernel reach of %d nodes.", (h, w), shape, radius)
    kernel = GridGeometry.centered((OVERSAMPLE * shape[0], OVERSAMPLE * shape[1]), spacing)
    window = (min(kernel.shape) // 2) * spacing
    if reach > window:
        logger.warning(
            "Kernel reach %.3g exceeds the FFT window half-extent %.3g; the spatial factor is truncated.",
            reach,
            window,
        )
    return _Plan(padded=GridGeometry(shape=shape, origin=F.spatial.origin, spacing=spacing), kernel=kernel)


def _kernel_spectrum(term: KernelTerm, plan: _Plan) -> Spectrum2:
    """Transform of k₁ embedded on the plan's kernel grid, cached on the term."""
    key = plan.kernel.shape + (plan.kernel.spacing,)
    if key not in term._spectra:
        term._spectra[key] = dft(resample(term.k1, plan.kernel))
    return term._spectra[key]


def _warped_spectra(term: KernelTerm, plan: _Plan, targets: np.ndarray) -> np.ndarray:
    """Transforms of z ↦ k₁(−B⁻¹z) for each target B, shape (m, P, Q)."""
    spectrum = _kernel_spectrum(term, plan)
    shape = plan.padded.shape
    return np.stack([affine_spectrum(spectrum, Mat2.from_array(-B), shape=shape).values for B in targets])


def _fiber_spectra(F: LiftedSignal, plan: _Plan, indices: np.ndarray) -> np.ndarray:
    h, w = F.spatial.shape
    padded = np.zeros((len(indices),) + tuple(plan.padded.shape))
    padded[:, :h, :w] = F.values[indices]
    return dft_stack(padded, plan.padded)


def _correlate(
    F: LiftedSignal,
    kern: SeparableKernel,
    plan: _Plan,
    targets: np.ndarray,
    matrices: np.ndarray,
    spectra: np.ndarray,
    weights: np.ndarray,
    det_epsilon: float,
) -> np.ndarray:
    """Σ_n weights[n]·k₂(B⁻¹Aₙ)/|det Aₙ|·(Fₙ ⋆ k₁∘B⁻¹) for each target B, shape (m, H, W)."""
    h, w = F.spatial.shape
    target_inverses = batch_inverse(targets, det_epsilon)
    scale = weights / np.abs(batch_det(matrices))
    flat = spectra.reshape(len(matrices), -1)
    out = np.zeros((len(targets), h, w))
    for term in kern.terms:
        coefficients = term.k2(np.einsum("mij,njk->mnik", target_inverses, matrices)) * scale
        combined = (coefficients @ flat).reshape((len(targets),) + tuple(plan.padded.shape))
        combined *= _warped_spectra(term, plan, targets)
        out += idft_stack(combined, plan.padded).real[:, :h, :w]
    return out


def h_inner(
    F: LiftedSignal,
    kern: SeparableKernel,
    A: Mat2,
    B: Mat2,
    y: typing.Sequence[float],
    *,
    det_epsilon: float = DET_EPSILON,
) -> float:
    """Inner integral k₂(B⁻¹A)/|det A|·∫ F([x, A])·k₁(B⁻¹(x − y)) dx through the Fourier path.

    The fiber at A is the one of the chart node whose cell contains A; A outside the chart
    gives 0.

    Raises:
        SingularMatrix: if A or B is singular.
    """
    invert_mat(A, det_epsilon)
    a = A.to_array()[None]
    b = B.to_array()[None]
    index, valid = nearest_nodes(F.chart, a)
    if not valid[0]:
        return 0.0
    plan = _plan(F, kern, b)
    spectra = _fiber_spectra(F, plan, index)
    out = _correlate(F, kern, plan, b, a, spectra, np.ones(1), det_epsilon)
    return float(sample(Grid2.on(F.spatial, out[0]), np.asarray(y, dtype=float)))


def h_inner_direct(
    F: LiftedSignal,
    kern: SeparableKernel,
    A: Mat2,
    B: Mat2,
    y: typing.Sequence[float],
    *,
    det_epsilon: float = DET_EPSILON,
) -> float:
    """Same inner integral as `h_inner`, as a direct Riemann sum over the fiber grid."""
    invert_mat(A, det_epsilon)
    index, valid = nearest_nodes(F.chart, A.to_array()[None])
    if not valid[0]:
        return 0.0
    target = AffineElement(x=(float(y[0]), float(y[1])), A=B)
    arguments = apply(invert(target, det_epsilon), F.spatial.points())
    relative = invert(target, det_epsilon).A.to_array() @ A.to_array()
    fiber = F.values[index[0]]
    total = 0.0
    for term in kern.terms:
        total += float(term.k2(relative)) * float(np.sum(fiber * sample(term.k1, arguments)))
    return total * F.spatial.spacing ** 2 / abs(A.det)


def gconv_at(
    F: LiftedSignal,
    kern: SeparableKernel,
    target: AffineElement,
    chart: typing.Optional[QuadratureChart] = None,
    *,
    det_epsilon: float = DET_EPSILON,
) -> float:
    """(F*k)(target), summing `h_inner` over the chart nodes with their Haar weights.

    Raises:
        ChartMismatch: if chart differs from F's chart.
        SingularMatrix: if the target is singular.
    """
    if chart is not None and chart != F.chart:
        raise ChartMismatch("The convolution chart differs from the lifted signal's chart.")
    nodes = chart_nodes(F.chart)
    b = target.A.to_array()[None]
    plan = _plan(F, kern, b)
    spectra = _fiber_spectra(F, plan, nodes.index)
    out = _correlate(F, kern, plan, b, nodes.matrices, spectra, nodes.weight, det_epsilon)
    return float(sample(Grid2.on(F.spatial, out[0]), np.asarray(target.x, dtype=float)))


def oracle_gconv_at(
    F: LiftedSignal,
    kern: SeparableKernel,
    target: AffineElement,
    *,
    det_epsilon: float = DET_EPSILON,
) -> float:
    """Brute-force Σ_n Σ_x F([x, Aₙ])·k(target⁻¹[x, Aₙ])·spacing²/|det Aₙ|·wₙ.

    The kernel argument is formed with group arithmetic at every node, independently of the
    Fourier reduction.
    """
    nodes = chart_nodes(F.chart)
    inverse = invert(target, det_epsilon)
    arguments = apply(inverse, F.spatial.points()).reshape(-1, 2)
    fibers = F.values.reshape(F.chart.size, -1)
    dets = np.abs(batch_det(nodes.matrices))
    total = 0.0
    for term in kern.terms:
        spatial = fibers @ sample(term.k1, arguments)
        for n, matrix in enumerate(nodes.matrices):
            relative = compose(inverse, AffineElement(A=Mat2.from_array(matrix))).A
            total += float(term.k2(relative.to_array())) * spatial[n] * nodes.weight[n] / dets[n]
    return total * F.spatial.spacing ** 2
def gconv(
    F: LiftedSignal,
    kern: SeparableKernel,
    *,
    chunk: int = 8,
    det_epsilon: float = DET_EPSILON,
) -> LiftedSignal:
    """F*k at every node of F's charts."""
    nodes = chart_nodes(F.chart)
    plan = _plan(F, kern, nodes.matrices)
    spectra = _fiber_spectra(F, plan, nodes.index)
    # Workers only read the spectrum cache.
    for term in kern.terms:
        _kernel_spectrum(term, plan)
    logger.debug("Convolving %d fibers with %d kernel terms.", F.chart.size, len(kern.terms))

    def block(start: int, stop: int) -> np.ndarray:
        return _correlate(
            F, kern, plan, nodes.matrices[start:stop], nodes.matrices, spectra, nodes.weight, det_epsilon
        )

    return F.with_values(np.concatenate(map_chunks(block, F.chart.size, chunk), axis=0))


def _relative(matrices: np.ndarray, det_epsilon: float) -> np.ndarray:
    """Bₘ⁻¹Aₙ for every pair of chart nodes, shape (m, n, 2, 2)."""
    return np.einsum("mij,njk->mnik", batch_inverse(matrices, det_epsilon), matrices)


def gconv_integral(F: LiftedSignal, kern: SeparableKernel, *, det_epsilon: float = DET_EPSILON) -> float:
    """∫_G₂ F*k over F's chart, the spatial integral running over the whole support of F*k.

    The spatial integral of a correlation is the product of the integrals of its factors, so only
    the zero frequency of each warped kernel, |det B|·∫k₁, enters and nothing is cropped to the
    window of F.
    """
    nodes = chart_nodes(F.chart)
    plan = _plan(F, kern, nodes.matrices)
    masses = F.values.reshape(F.chart.size, -1).sum(axis=1) * F.spatial.spacing ** 2
    relative = _relative(nodes.matrices, det_epsilon)
    scale = nodes.weight / np.abs(batch_det(nodes.matrices))
    total = 0.0
    for term in kern.terms:
        k1_mass = float(_kernel_spectrum(term, plan).values[0, 0].real)
        # |det B| of the warped kernel cancels the 1/|det B| of the G₂ measure.
        per_target = (term.k2(relative) * scale) @ masses
        total += float(np.sum(nodes.weight * per_target)) * k1_mass
    return total


def project(F: LiftedSignal, measure: ProjectionMeasure = ProjectionMeasure.HAAR) -> Grid2:
    """Projection layer: integrate every GL₂ fiber of F.

    Args:
        F (LiftedSignal): The lifted signal.
        measure (ProjectionMeasure): Haar measure of GL₂, or Lebesgue measure on the entries.
    """
    nodes = chart_nodes(F.chart)
    weights = nodes.weight
    if measure == ProjectionMeasure.LEBESGUE:
        weights = weights * batch_det(nodes.matrices) ** 2
    return Grid2.on(F.spatial, np.tensordot(weights, F.values, axes=1))


def kernel_l1_g2(kern: SeparableKernel, chart: QuadratureChart, *, det_epsilon: float = DET_EPSILON) -> float:
    """‖k‖₁ over G₂ as the convolution on chart meets it.

    A target B only sees the kernel over B⁻¹·chart, not over the chart itself. With
    Kₘₙ = Σᵢ |k₂ᵢ(Bₘ⁻¹Aₙ)|·‖k₁ᵢ‖₁, the norm is the larger of the weighted row sums
    Σₙ wₙ·Kₘₙ·|det Bₘ|/|det Aₙ|, which bound sup|F*k| by sup|F|, and the weighted column sums
    Σₘ wₘ·Kₘₙ, which bound |∫F*k| by ‖F‖₁. On a chart surrounding the support of k from every
    node, the row sums are ∫|k| dμ_G₂.
    """
    nodes = chart_nodes(chart)
    dets = np.abs(batch_det(nodes.matrices))
    relative = _relative(nodes.matrices, det_epsilon)
    magnitude = np.zeros(relative.shape[:2])
    for term in kern.terms:
        magnitude += np.abs(term.k2(relative)) * norms(term.k1)[0]
    rows = (magnitude * (nodes.weight / dets)[None, :]).sum(axis=1) * dets
    columns = (magnitude * nodes.weight[:, None]).sum(axis=0)
    return float(max(rows.max(), columns.max()))
