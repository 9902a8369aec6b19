"""Results of the invariance criteria, alignment and convergence studies."""
import typing

import pydantic

from .group import AffineElement


__all__ = [
    "AlignmentResult",
    "KernelBreakdown",
    "InvarianceReport",
    "StudyRow",
    "StudyResult",
    "CalibrationResult",
]


class AlignmentResult(pydantic.BaseModel):
    """Outcome of the brute-force alignment over G₂."""

    g: AffineElement
    """Best group element found."""

    params: typing.Tuple[float, float, float, float, float, float]
    """Search coordinates (tx, ty, ρ, θ, u, w) of g."""

    residual_l1: float
    residual_sup: float


class KernelBreakdown(pydantic.BaseModel):
    """Criteria for a single kernel of the bank."""

    kernel: str
    l1_norm: float
    """‖k‖₁ over G₂ on the run chart."""

    conv_deviation: float
    bound: float
    functional_gap: float
    functional_bound: float

    functional_scale: float = 0.0
    """max(|c(F₁)|, |c(ρ(h̃)F₂)|), the scale of the functional gap."""

    @property
    def relative_gap(self) -> float:
        return self.functional_gap / self.functional_scale if self.functional_scale > 0.0 else 0.0


class InvarianceReport(pydantic.BaseModel):
    """Report of the convolution-based invariance test of two signals."""

    epsilon_hat: float
    """sup |F₁ − ρ(h̃)F₂| over the chart, with h̃ = aligned_g."""

    conv_deviation: float
    bound: float
    functional_gap: float

    relative_gap: float = 0.0
    """Largest functional gap relative to its scale over the bank; `invariance_threshold` applies to it."""

    aligned_g: AffineElement
    kernels: typing.List[KernelBreakdown]

    def to_json(self) -> typing.Dict[str, typing.Any]:
        data = self.model_dump(mode="json")
        data["aligned_g"] = self.aligned_g.to_json()
        return data


class StudyRow(pydantic.BaseModel):
    resolution: float
    error: float


class StudyResult(pydantic.BaseModel):
    """A refinement ladder of errors against an oracle."""

    study: str
    rows: typing.List[StudyRow]

    @property
    def decreasing(self) -> bool:
        errors = [row.error for row in self.rows]
        return all(b < a for a, b in zip(errors, errors[1:]))

    def to_csv(self) -> str:
        lines = ["resolution,error"]
        lines.extend(f"{row.resolution:.10g},{row.error:.10g}" for row in self.rows)
        return "\n".join(lines) + "\n"


class CalibrationResult(pydantic.BaseModel):
    """Functional gaps over a generated corpus and the threshold separating them.

    The threshold is calibration output for the default configuration, not ground truth.
    """

    threshold: float
    """Geometric mean of the largest matched gap and the smallest unmatched gap."""

    matched_max: float
    unmatched_min: float

    separated: bool
    """Whether every matched gap lies below every unmatched gap."""

    matched_gaps: typing.List[float]
    unmatched_gaps: typing.List[float]

    recovered: int
    """Matched pairs whose alignment lands within one search cell of the true element."""
