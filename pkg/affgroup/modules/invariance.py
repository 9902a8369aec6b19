"""Convolution-based affine invariance criteria."""
import logging
import typing

import numpy as np

from ..errors import ChartMismatch, ShapeMismatch
from ..models.chart import QuadratureChart
from ..models.config import Tolerances
from ..models.grid import Grid2
from ..models.group import DET_EPSILON, AffineElement
from ..models.kernel import SeparableKernel
from ..models.lifted import LiftedSignal
from ..models.report import InvarianceReport, KernelBreakdown
from .gconv import gconv, gconv_integral, kernel_l1_g2
from .haarquad import lifted_l1
from .lifting import lift, regular_action


__all__ = [
    "conv_invariance_test",
    "functional_c",
    "functional_gap_test",
    "converse_probe",
    "build_report",
]


logger = logging.getLogger(__name__)


def _check_charts(F1: LiftedSignal, F2: LiftedSignal) -> None:
    if F1.spatial != F2.spatial:
        raise ShapeMismatch(f"Lifted signals live on different grids: {F1.spatial} and {F2.spatial}.")
    if F1.chart != F2.chart:
        raise ChartMismatch("Lifted signals are sampled on different group charts.")


def _sup(F: LiftedSignal) -> float:
    return float(np.max(np.abs(F.values)))


def conv_invariance_test(
    F1: LiftedSignal,
    F2: LiftedSignal,
    h_tilde: AffineElement,
    kern: SeparableKernel,
    *,
    kernel_norm: typing.Optional[float] = None,
    det_epsilon: float = DET_EPSILON,
) -> typing.Tuple[float, float]:
    """sup|F₁*k − ρ(h̃)(F₂*k)| and its bound sup|F₁ − ρ(h̃)F₂|·‖k‖₁.

    ρ(h̃)(F₂*k) is computed as (ρ(h̃)F₂)*k, the convolution commuting with left translations.

    Args:
        F1 (LiftedSignal): First lifted signal.
        F2 (LiftedSignal): Second lifted signal, on the same charts.
        h_tilde (AffineElement): Element aligning the second signal with the first.
        kern (SeparableKernel): The kernel.
        kernel_norm (typing.Optional[float]): Precomputed ‖k‖₁ over G₂ on the charts.
        det_epsilon (float): Singularity threshold.

    Raises:
        ShapeMismatch: if the spatial grids differ.
        ChartMismatch: if the group charts differ.
    """
    _check_charts(F1, F2)
    moved = regular_action(F2, h_tilde, det_epsilon=det_epsilon)
    epsilon_hat = _sup(F1 - moved)
    deviation = _sup(gconv(F1, kern, det_epsilon=det_epsilon) - gconv(moved, kern, det_epsilon=det_epsilon))
    if kernel_norm is None:
        kernel_norm = kernel_l1_g2(kern, F1.chart, det_epsilon=det_epsilon)
    return deviation, epsilon_hat * kernel_norm


def functional_c(F: LiftedSignal, kern: SeparableKernel, *, det_epsilon: float = DET_EPSILON) -> float:
    """c(F) = ∫_G₂ F*k dμ_G₂ over F's chart, spatially over the whole support of F*k."""
    return gconv_integral(F, kern, det_epsilon=det_epsilon)


def functional_gap_test(
    F1: LiftedSignal,
    F2: LiftedSignal,
    kern: SeparableKernel,
    epsilon_hat: float,
    *,
    kernel_norm: typing.Optional[float] = None,
    det_epsilon: float = DET_EPSILON,
) -> typing.Tuple[float, float]:
    """|c(F₁) − c(F₂)| and its bound ε̂·‖k‖₁, for ε̂ an 𝕃₁ distance ‖F₁ − ρ(h̃)F₂‖₁.

    Raises:
        ShapeMismatch: if the spatial grids differ.
        ChartMismatch: if the group charts differ.
    """
    _check_charts(F1, F2)
    gap = abs(functional_c(F1, kern, det_epsilon=det_epsilon) - functional_c(F2, kern, det_epsilon=det_epsilon))
    if kernel_norm is None:
        kernel_norm = kernel_l1_g2(kern, F1.chart, det_epsilon=det_epsilon)
    return gap, epsilon_hat * kernel_norm


def converse_probe(
    F1: LiftedSignal,
    F2: LiftedSignal,
    h_tilde: AffineElement,
    kern: SeparableKernel,
    *,
    det_epsilon: float = DET_EPSILON,
) -> typing.Tuple[float, float]:
    """Convolution deviation per unit kernel norm, next to the lifted deviation it approximates.

    With a kernel concentrated near a single group element, (F₁ − ρ(h̃)F₂)*k/‖k‖₁ tends to a
    translate of F₁ − ρ(h̃)F₂, so the first value approaches the second from below.
    """
    _check_charts(F1, F2)
    moved = regular_action(F2, h_tilde, det_epsilon=det_epsilon)
    difference = F1 - moved
    norm = kernel_l1_g2(kern, F1.chart, det_epsilon=det_epsilon)
    deviation = _sup(gconv(difference, kern, det_epsilon=det_epsilon))
    return (deviation / norm if norm > 0.0 else 0.0), _sup(difference)


def build_report(
    f1: Grid2,
    f2: Grid2,
    lifting_kernel: Grid2,
    bank: typing.Sequence[SeparableKernel],
    aligned_g: AffineElement,
    chart: QuadratureChart,
    tolerances: typing.Optional[Tolerances] = None,
) -> InvarianceReport:
    """Run every criterion for a pair of planar signals over a kernel bank.

    The functional gap compares c(F₁) with c(ρ(h̃)F₂). Both equal c(F₂) on the whole group; on a
    truncated chart only the first is bounded by ‖F₁ − ρ(h̃)F₂‖₁·‖k‖₁. The report's headline
    figures are the worst case over the bank.

    Args:
        f1 (Grid2): First signal.
        f2 (Grid2): Second signal, on the same grid.
        lifting_kernel (Grid2): Kernel of the lifting layer.
        bank (typing.Sequence[SeparableKernel]): Kernels to test with.
        aligned_g (AffineElement): Element aligning f2 with f1, usually from `oracle_align`.
        chart (QuadratureChart): Group chart of the lifts.
        tolerances (typing.Optional[Tolerances]): Numerical tolerances.

    Raises:
        ShapeMismatch: if the signals live on different grids.
    """
    tolerances = tolerances or Tolerances()
    if f1.geometry != f2.geometry:
        raise ShapeMismatch(f"Grids {f1.geometry} and {f2.geometry} differ.")
    det_epsilon = tolerances.det_epsilon
    F1 = lift(f1, lifting_kernel, chart, det_epsilon=det_epsilon)
    F2 = lift(f2, lifting_kernel, chart, det_epsilon=det_epsilon)
    moved = regular_action(F2, aligned_g, det_epsilon=det_epsilon)
    epsilon_hat = _sup(F1 - moved)
    epsilon_l1 = lifted_l1(F1 - moved)

    breakdown = []
    for kern in bank:
        norm = kernel_l1_g2(kern, chart, det_epsilon=det_epsilon)
        deviation = _sup(gconv(F1, kern, det_epsilon=det_epsilon) - gconv(moved, kern, det_epsilon=det_epsilon))
        c1 = gconv_integral(F1, kern, det_epsilon=det_epsilon)
        c2 = gconv_integral(moved, kern, det_epsilon=det_epsilon)
        entry = KernelBreakdown(
            kernel=kern.name,
            l1_norm=norm,
            conv_deviation=deviation,
            bound=epsilon_hat * norm,
            functional_gap=abs(c1 - c2),
            functional_bound=epsilon_l1 * norm,
            functional_scale=max(abs(c1), abs(c2)),
        )
        if not tolerances.within_bound(entry.conv_deviation, entry.bound):
            logger.warning("Kernel %s: deviation %.3e exceeds bound %.3e.", kern.name, entry.conv_deviation, entry.bound)
        if not tolerances.within_bound(entry.functional_gap, entry.functional_bound):
            logger.warning(
                "Kernel %s: functional gap %.3e exceeds bound %.3e.", kern.name, entry.functional_gap, entry.functional_bound
            )
        breakdown.append(entry)

    return InvarianceReport(
        epsilon_hat=epsilon_hat,
        conv_deviation=max((b.conv_deviation for b in breakdown), default=0.0),
        bound=max((b.bound for b in breakdown), default=0.0),
        functional_gap=max((b.functional_gap for b in breakdown), default=0.0),
        relative_gap=max((b.relative_gap for b in breakdown), default=0.0),
        aligned_g=aligned_g,
        kernels=breakdown,
    )
