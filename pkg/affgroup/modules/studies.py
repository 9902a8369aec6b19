"""Refinement studies comparing the quadratures against independent oracles."""
import logging
import typing

import numpy as np

from ..models.chart import AxisKind, ChartAxis, QuadratureChart
from ..models.config import RunConfig
from ..models.grid import GridGeometry
from ..models.group import AffineElement, Mat2
from ..models.kernel import GaussianBump, KernelTerm, SeparableKernel
from ..models.lifted import LiftedSignal
from ..models.report import StudyResult, StudyRow
from .bank import gaussian_grid
from .gconv import gconv_at, oracle_gconv_at
from .haarquad import chart_nodes, integrate_gl2, oracle_gl2
from .lifting import lift
from .synth import blobs


__all__ = ["STUDIES", "haar_study", "gconv_study", "delta_study", "run_study"]


logger = logging.getLogger(__name__)


def _bump(matrices: np.ndarray) -> np.ndarray:
    return GaussianBump(width=0.2)(matrices)


def haar_study(config: typing.Optional[RunConfig] = None, factors: typing.Sequence[float] = (1.0, 1.5, 2.0)) -> StudyResult:
    """GL₂ chart quadrature of a Gaussian bump at I against the entry-space oracle."""
    config = config or RunConfig()
    chart = config.chart.to_chart()
    reference = oracle_gl2(_bump, [(0.0, 2.0), (-1.0, 1.0), (-1.0, 1.0), (0.0, 2.0)], (40, 40, 40, 40),
                           config.tolerances.det_epsilon)
    rows = []
    for factor in factors:
        value = integrate_gl2(_bump, chart.refined(factor), boundary_mass_tol=config.tolerances.boundary_mass_tol)
        rows.append(StudyRow(resolution=factor, error=abs(value - reference) / abs(reference)))
    return StudyResult(study="haar", rows=rows)


def _tiny_chart(count: int) -> QuadratureChart:
    return QuadratureChart(
        rho=ChartAxis(kind=AxisKind.LOG_RADIAL, lo=-0.6, hi=0.6, count=count),
        theta=ChartAxis(lo=-0.6, hi=0.6, count=count),
        u=ChartAxis(lo=-0.6, hi=0.6, count=count),
        w=ChartAxis(kind=AxisKind.LOG_SIGNED, lo=-0.6, hi=0.6, count=count),
        signs=(1,),
    )


def _analytic_lift(chart: QuadratureChart, spatial: GridGeometry) -> LiftedSignal:
    """Separable F([x, A]) = exp(−|x|²/4.5)·exp(−‖A − I‖²_F/0.09) sampled on the charts."""
    points = spatial.points()
    planar = np.exp(-np.sum(points * points, axis=-1) / 4.5)
    group = GaussianBump(width=0.3)(chart_nodes(chart).matrices)
    return LiftedSignal(values=group[:, None, None] * planar[None], chart=chart, spatial=spatial)


def gconv_study(config: typing.Optional[RunConfig] = None, counts: typing.Sequence[int] = (3, 4, 6)) -> StudyResult:
    """Fourier-reduced group convolution on coarse charts against a brute-force fine-chart reference."""
    config = config or RunConfig()
    spatial = GridGeometry.centered((8, 8), 1.0)
    kern = SeparableKernel(
        terms=[KernelTerm(k1=gaussian_grid(1.0), k2=GaussianBump(width=0.5))],
        name="theorem4",
    )
    target = AffineElement(x=(0.5, -0.5), A=Mat2.rotation(0.1))
    det_epsilon = config.tolerances.det_epsilon
    reference = oracle_gconv_at(_analytic_lift(_tiny_chart(12), spatial), kern, target, det_epsilon=det_epsilon)
    rows = []
    for count in counts:
        value = gconv_at(_analytic_lift(_tiny_chart(count), spatial), kern, target, det_epsilon=det_epsilon)
        rows.append(StudyRow(resolution=count, error=abs(value - reference) / abs(reference)))
    return StudyResult(study="theorem4", rows=rows)


def _identity_chart() -> QuadratureChart:
    """Single-node chart whose only node is I."""
    return QuadratureChart(
        rho=ChartAxis(kind=AxisKind.LOG_RADIAL, lo=-0.01, hi=0.01, count=1),
        theta=ChartAxis(lo=-0.01, hi=0.01, count=1),
        u=ChartAxis(lo=-0.01, hi=0.01, count=1),
        w=ChartAxis(kind=AxisKind.LOG_SIGNED, lo=-0.01, hi=0.01, count=1),
        signs=(1,),
    )


def delta_study(config: typing.Optional[RunConfig] = None, widths: typing.Sequence[float] = (2.0, 1.0, 0.5, 0.25)) -> StudyResult:
    """Identity fiber of the lift with shrinking Gaussian kernels against the input itself."""
    config = config or RunConfig()
    f = blobs((24, 24), np.random.default_rng(config.seed))
    rows = []
    for width in widths:
        kernel = gaussian_grid(width * f.spacing, f.spacing, config.kernel_radius)
        fiber = lift(f, kernel, _identity_chart()).values[0]
        rows.append(StudyRow(resolution=width, error=float(np.max(np.abs(fiber - f.values)))))
    return StudyResult(study="delta", rows=rows)


STUDIES: typing.Dict[str, typing.Callable[[typing.Optional[RunConfig]], StudyResult]] = {
    "haar": haar_study,
    "theorem4": gconv_study,
    "delta": delta_study,
}
"""Convergence studies by name."""


def run_study(name: str, config: typing.Optional[RunConfig] = None) -> StudyResult:
    """Run a study by name and log a warning when its errors do not decrease.

    Raises:
        KeyError: if no study has that name.
    """
    if name not in STUDIES:
        raise KeyError(f"Unknown study {name!r}; choose one of {', '.join(STUDIES)}.")
    result = STUDIES[name](config)
    if not result.decreasing:
        logger.warning("Study %s did not converge monotonically: %s", name, [row.error for row in result.rows])
    return result
