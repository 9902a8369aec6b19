"""Run configuration for affgroup."""
import enum
import math
import typing

import pydantic

from .chart import AxisKind, ChartAxis, QuadratureChart
from .group import DET_EPSILON, RECONSTRUCT_TOL


__all__ = [
    "Tolerances",
    "ChartConfig",
    "SearchAxis",
    "SearchBox",
    "ProjectionMeasure",
    "BankConfig",
    "RunConfig",
]


class Tolerances(pydantic.BaseModel):
    """Numerical tolerances."""

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

    det_epsilon: float = pydantic.Field(default=DET_EPSILON, gt=0.0)
    """Matrices with |det| at or below this value are singular."""

    reconstruct_tol: float = pydantic.Field(default=RECONSTRUCT_TOL, gt=0.0)
    """Relative tolerance of factorization round-trips."""

    fft_round_trip_tol: float = pydantic.Field(default=1e-10, gt=0.0)
    """Absolute tolerance of dft/idft round-trips."""

    interp_tol: float = pydantic.Field(default=2e-2, gt=0.0)
    """Relative interpolation tolerance for Gaussians of width ≥ 3·spacing."""

    affine_fourier_tol: float = pydantic.Field(default=1e-2, gt=0.0)
    """Relative tolerance of the affine Fourier identity."""

    boundary_mass_tol: float = pydantic.Field(default=1e-3, gt=0.0)
    """Fraction of integrand mass allowed on the chart boundary before warning."""

    slack: float = pydantic.Field(default=0.05, ge=0.0)
    """Multiplicative slack on bound assertions."""

    slack_abs: float = pydantic.Field(default=1e-9, ge=0.0)
    """Absolute slack on bound assertions."""

    def within_bound(self, value: float, bound: float) -> bool:
        return value <= bound * (1.0 + self.slack) + self.slack_abs


class ChartConfig(pydantic.BaseModel):
    """Flat, file-friendly description of a QuadratureChart."""

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

    rho_lo: float = -4.0
    rho_hi: float = 4.0
    rho_count: int = pydantic.Field(default=32, ge=1)
    theta_lo: float = 0.0
    theta_hi: float = 2.0 * math.pi
    theta_count: int = pydantic.Field(default=32, ge=1)
    u_lo: float = -8.0
    u_hi: float = 8.0
    u_count: int = pydantic.Field(default=64, ge=1)
    w_lo: float = -4.0
    w_hi: float = 4.0
    w_count: int = pydantic.Field(default=32, ge=1)
    signs: typing.Tuple[int, ...] = (1, -1)

    def to_chart(self) -> QuadratureChart:
        """Build the chart; bound ordering is checked by ChartAxis."""
        return QuadratureChart(
            rho=ChartAxis(kind=AxisKind.LOG_RADIAL, lo=self.rho_lo, hi=self.rho_hi, count=self.rho_count),
            theta=ChartAxis(lo=self.theta_lo, hi=self.theta_hi, count=self.theta_count),
            u=ChartAxis(lo=self.u_lo, hi=self.u_hi, count=self.u_count),
            w=ChartAxis(kind=AxisKind.LOG_SIGNED, lo=self.w_lo, hi=self.w_hi, count=self.w_count),
            signs=self.signs,
        )

    @classmethod
    def reduced(cls) -> "ChartConfig":
        """Small chart near the identity used by the pipeline commands."""
        return cls(
            rho_lo=-0.5, rho_hi=0.5, rho_count=4,
            theta_count=8,
            u_lo=-0.5, u_hi=0.5, u_count=4,
            w_lo=-0.5, w_hi=0.5, w_count=4,
            signs=(1,),
        )


class SearchAxis(pydantic.BaseModel):
    """Closed search interval sampled at `count` equally spaced points."""

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

    lo: float
    hi: float
    count: int = 1

    def nodes(self) -> typing.List[float]:
        if self.count == 1:
            return [0.5 * (self.lo + self.hi)]
        step = (self.hi - self.lo) / (self.count - 1)
        return [self.lo + step * i for i in range(self.count)]

    @property
    def step(self) -> float:
        return 0.0 if self.count == 1 else (self.hi - self.lo) / (self.count - 1)


class SearchBox(pydantic.BaseModel):
    """Search ranges over translation and the positive-determinant chart (ρ, θ, u, w)."""

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

    tx: SearchAxis = SearchAxis(lo=-4.0, hi=4.0, count=9)
    ty: SearchAxis = SearchAxis(lo=-4.0, hi=4.0, count=9)
    rho: SearchAxis = SearchAxis(lo=-0.3, hi=0.3, count=5)
    theta: SearchAxis = SearchAxis(lo=-0.6, hi=0.6, count=5)
    u: SearchAxis = SearchAxis(lo=-0.4, hi=0.4, count=5)
    w: SearchAxis = SearchAxis(lo=-0.3, hi=0.3, count=5)
    levels: int = pydantic.Field(default=6, ge=0)
    """Halvings of the coordinate-descent step after the grid search."""

    def axes(self) -> typing.List[SearchAxis]:
        return [self.tx, self.ty, self.rho, self.theta, self.u, self.w]


class ProjectionMeasure(enum.Enum):
    """Measure of the projection layer's fiber integral."""

    HAAR = "haar"
    LEBESGUE = "lebesgue"


class BankConfig(pydantic.BaseModel):
    """Parameters of the standard kernel bank."""

    model_config = pydantic.ConfigDict(extra="forbid", frozen=True)

    widths: typing.Tuple[float, float] = (1.0, 2.0)
    """Gaussian widths of the spatial factors, in grid spacings."""

    bump_width: float = pydantic.Field(default=0.5, gt=0.0)
    """Frobenius width of the matrix bumps."""

    centers: typing.Tuple[typing.Tuple[float, float, float, float], ...] = (
        (1.0, 0.0, 0.0, 1.0),
        (1.1, -0.2, 0.2, 1.1),
        (0.9, 0.0, 0.15, 0.9),
    )
    """Matrix bump centers, row-major."""


class RunConfig(pydantic.BaseModel):
    """Everything a CLI run can be configured with."""

    model_config = pydantic.ConfigDict(extra="forbid")

    chart: ChartConfig = pydantic.Field(default_factory=ChartConfig)
    """Default quadrature chart for Haar integrals."""

    run_chart: ChartConfig = pydantic.Field(default_factory=ChartConfig.reduced)
    """Group chart used by the lift / gconv / project / invariance pipeline."""

    tolerances: Tolerances = pydantic.Field(default_factory=Tolerances)
    bank: BankConfig = pydantic.Field(default_factory=BankConfig)
    search: SearchBox = pydantic.Field(default_factory=SearchBox)

    lift_width: float = pydantic.Field(default=1.0, gt=0.0)
    """Gaussian width of the lifting kernel, in grid spacings."""

    kernel_radius: int = pydantic.Field(default=3, ge=1)
    """Half-size of sampled spatial kernels, in widths."""

    kernel: typing.Optional[str] = None
    """Bank kernel by name. `gconv` uses the first kernel of the bank and `invariance` the whole bank when unset."""

    projection_measure: ProjectionMeasure = ProjectionMeasure.HAAR

    invariance_threshold: float = pydantic.Field(default=5e-2, ge=0.0)
    """Largest relative functional gap |c(F₁) − c(ρ(h̃)F₂)| / max(|c|) `invariance` accepts.

    `calibrate` prints the threshold separating a generated corpus.
    """

    padding: typing.Optional[int] = pydantic.Field(default=None, ge=0)
    """Zero border added around both images of `invariance` before lifting, in grid nodes; the
    lift's reach over the run chart when unset."""

    threads: typing.Optional[int] = pydantic.Field(default=None, ge=1)
    """Worker cap; AFFGROUP_THREADS applies when unset."""

    seed: int = 0
    """Seed for random pair generation and calibration corpora."""

    corpus_size: int = pydantic.Field(default=50, ge=2)
    """Number of pairs (half matched, half unmatched) in a calibration corpus."""

    input: typing.Optional[str] = None
    input_b: typing.Optional[str] = None
    output: typing.Optional[str] = None
    output_b: typing.Optional[str] = None
    truth: typing.Optional[str] = None
    """Ground-truth JSON path of `gen-pair`."""

    params: typing.Optional[typing.Tuple[float, float, float, float, float, float]] = None
    """Group element (tx, ty, ρ, θ, u, w) for `gen-pair`; random when unset."""

    study: typing.Optional[str] = None
    """Convergence study name: haar, theorem4 or delta."""
