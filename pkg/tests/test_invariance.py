"""Tests for the convolution-based invariance criteria."""
import numpy as np
import pytest

from affgroup.errors import ChartMismatch, ShapeMismatch
from affgroup.models.chart import AxisKind, ChartAxis, QuadratureChart
from affgroup.models.config import ChartConfig, Tolerances
from affgroup.models.grid import Grid2, GridGeometry
from affgroup.models.group import AffineElement, Mat2
from affgroup.modules.affine import invert
from affgroup.modules.bank import gaussian_grid, group_delta_kernel, standard_bank
from affgroup.modules.gconv import kernel_l1_g2
from affgroup.modules.haarquad import lifted_l1
from affgroup.modules.invariance import (
    build_report,
    conv_invariance_test,
    converse_probe,
    functional_c,
    functional_gap_test,
)
from affgroup.modules.lifting import lift, regular_action
from affgroup.modules.signal import act

from .conftest import small_chart


def centered_chart(count: int = 3, half: float = 0.3) -> QuadratureChart:
    """Chart with a node at the identity when count is odd."""
    return QuadratureChart(
        rho=ChartAxis(kind=AxisKind.LOG_RADIAL, lo=-half, hi=half, count=count),
        theta=ChartAxis(lo=-2.0 * half, hi=2.0 * half, count=count),
        u=ChartAxis(lo=-half, hi=half, count=count),
        w=ChartAxis(kind=AxisKind.LOG_SIGNED, lo=-half, hi=half, count=count),
        signs=(1,),
    )


def perturbed(f: Grid2, center=(2.0, -1.0), amplitude: float = 0.3) -> Grid2:
    points = f.geometry.points() - np.asarray(center)
    bump = amplitude * np.exp(-np.sum(points * points, axis=-1) / 8.0)
    return f.with_values(f.values + bump)


@pytest.fixture
def grid_chart() -> QuadratureChart:
    return centered_chart()


class TestConvolutionCriterion:
    def test_identical_signals(self, image, kernel, grid_chart):
        F = lift(image, kernel, grid_chart)
        kern = standard_bank()[0]
        deviation, bound = conv_invariance_test(F, F, AffineElement(), kern)
        assert deviation == 0.0
        assert bound == 0.0

    def test_bound_holds_for_local_change(self, image, kernel, grid_chart):
        F1 = lift(image, kernel, grid_chart)
        F2 = lift(perturbed(image), kernel, grid_chart)
        tolerances = Tolerances()
        for kern in standard_bank():
            deviation, bound = conv_invariance_test(F1, F2, AffineElement(), kern)
            assert deviation > 0.0
            assert tolerances.within_bound(deviation, bound)

    def test_constant_against_zero(self, kernel, grid_chart):
        F1 = lift(Grid2.centered(np.ones((16, 16))), kernel, grid_chart)
        F2 = lift(Grid2.centered(np.zeros((16, 16))), kernel, grid_chart)
        for kern in standard_bank():
            deviation, bound = conv_invariance_test(F1, F2, AffineElement(), kern)
            assert Tolerances().within_bound(deviation, bound)

    def test_scaling_the_kernel(self, image, kernel, grid_chart):
        F1 = lift(image, kernel, grid_chart)
        F2 = lift(perturbed(image), kernel, grid_chart)
        kern = standard_bank()[0]
        deviation, bound = conv_invariance_test(F1, F2, AffineElement(), kern)
        scaled, scaled_bound = conv_invariance_test(F1, F2, AffineElement(), kern.scaled(3.0))
        assert scaled == pytest.approx(3.0 * deviation, rel=1e-9)
        assert scaled_bound == pytest.approx(3.0 * bound, rel=1e-9)

    def test_chart_mismatch(self, image, kernel, grid_chart):
        F1 = lift(image, kernel, grid_chart)
        F2 = lift(image, kernel, small_chart())
        with pytest.raises(ChartMismatch):
            conv_invariance_test(F1, F2, AffineElement(), standard_bank()[0])

    def test_shape_mismatch(self, image, kernel, grid_chart):
        F1 = lift(image, kernel, grid_chart)
        F2 = lift(Grid2.centered(np.zeros((8, 8))), kernel, grid_chart)
        with pytest.raises(ShapeMismatch):
            conv_invariance_test(F1, F2, AffineElement(), standard_bank()[0])


class TestFunctional:
    def test_linear(self, image, kernel, grid_chart):
        F = lift(image, kernel, grid_chart)
        kern = standard_bank()[1]
        assert functional_c(F * 2.0, kern) == pytest.approx(2.0 * functional_c(F, kern), rel=1e-12)

    def test_identical_gap(self, image, kernel, grid_chart):
        F = lift(image, kernel, grid_chart)
        gap, bound = functional_gap_test(F, F, standard_bank()[0], 0.0)
        assert gap == 0.0
        assert bound == 0.0

    def test_gap_is_symmetric(self, image, kernel, grid_chart):
        F1 = lift(image, kernel, grid_chart)
        F2 = lift(perturbed(image), kernel, grid_chart)
        kern = standard_bank()[0]
        forward, _ = functional_gap_test(F1, F2, kern, 1.0)
        backward, _ = functional_gap_test(F2, F1, kern, 1.0)
        assert forward > 0.0
        assert forward == pytest.approx(backward, rel=1e-12)


    def test_gap_within_bound(self, image, kernel, grid_chart):
        F1 = lift(image, kernel, grid_chart)
        F2 = lift(perturbed(image), kernel, grid_chart)
        epsilon = lifted_l1(F1 - F2)
        for kern in standard_bank():
            gap, bound = functional_gap_test(F1, F2, kern, epsilon)
            assert gap > 0.0
            assert Tolerances().within_bound(gap, bound)

    def test_on_grid_translation(self):
        geometry = GridGeometry.centered((40, 40))
        points = geometry.points()
        f1 = Grid2.on(geometry, np.exp(-np.sum(points * points, axis=-1) / 4.5))
        shift = AffineElement.translation((1.0, 0.0))
        f2 = act(shift, f1)
        chart = ChartConfig.reduced().to_chart()
        F1 = lift(f1, gaussian_grid(1.0), chart)
        F2 = lift(f2, gaussian_grid(1.0), chart)
        kern = standard_bank()[0]
        norm = kernel_l1_g2(kern, chart)
        epsilon = lifted_l1(F1 - regular_action(F2, invert(shift)))
        assert epsilon < 1e-9 * lifted_l1(F1)
        gap, _ = functional_gap_test(F1, F2, kern, epsilon, kernel_norm=norm)
        assert gap < 1e-3 * norm


class TestConverse:
    def test_narrow_kernel_recovers_lifted_deviation(self, image, kernel, grid_chart):
        F1 = lift(image, kernel, grid_chart)
        F2 = lift(perturbed(image), kernel, grid_chart)
        narrow = group_delta_kernel(Mat2.identity(), spatial_width=1.0, bump_width=0.1)
        ratio, lifted = converse_probe(F1, F2, AffineElement(), narrow)
        assert lifted > 0.0
        assert 0.5 * lifted <= ratio <= 1.05 * lifted

    def test_identical(self, image, kernel, grid_chart):
        F = lift(image, kernel, grid_chart)
        narrow = group_delta_kernel(Mat2.identity(), spatial_width=1.0, bump_width=0.1)
        assert converse_probe(F, F, AffineElement(), narrow) == (0.0, 0.0)


class TestReport:
    def test_identical_images(self, image, kernel, grid_chart):
        report = build_report(image, image, kernel, standard_bank()[:2], AffineElement(), grid_chart)
        assert report.epsilon_hat == 0.0
        assert report.conv_deviation == 0.0
        assert report.functional_gap == 0.0
        assert [entry.kernel for entry in report.kernels] == ["c0-w1", "c0-w2"]

    def test_local_change(self, image, kernel, grid_chart):
        report = build_report(image, perturbed(image), gaussian_grid(1.0), standard_bank()[:2], AffineElement(), grid_chart)
        assert report.epsilon_hat > 0.0
        assert report.functional_gap > 0.0
        for entry in report.kernels:
            assert entry.l1_norm > 0.0
            assert Tolerances().within_bound(entry.conv_deviation, entry.bound)
            assert Tolerances().within_bound(entry.functional_gap, entry.functional_bound)
            assert entry.relative_gap == pytest.approx(entry.functional_gap / entry.functional_scale)
        assert report.conv_deviation == max(entry.conv_deviation for entry in report.kernels)

    def test_json_fields(self, image, kernel, grid_chart):
        report = build_report(image, image, kernel, standard_bank()[:1], AffineElement(x=(1.0, 0.0)), grid_chart)
        data = report.to_json()
        assert set(data) == {"epsilon_hat", "conv_deviation", "bound", "functional_gap", "relative_gap", "aligned_g", "kernels"}
        assert data["aligned_g"] == {"x": [1.0, 0.0], "A": [[1.0, 0.0], [0.0, 1.0]]}

    def test_shape_mismatch(self, image, kernel, grid_chart):
        with pytest.raises(ShapeMismatch):
            build_report(image, Grid2.centered(np.zeros((8, 8))), kernel, standard_bank()[:1], AffineElement(), grid_chart)
