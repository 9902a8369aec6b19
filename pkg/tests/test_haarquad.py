"""Tests for the Haar-measure quadratures."""
import math
import warnings

import numpy as np
import pytest

from affgroup.errors import ChartTooSmall, NonFiniteSample
from affgroup.models.chart import AxisKind, ChartAxis, QuadratureChart
from affgroup.models.config import ChartConfig, RunConfig
from affgroup.models.grid import GridGeometry
from affgroup.models.group import Mat2
from affgroup.models.kernel import GaussianBump
from affgroup.models.lifted import LiftedSignal
from affgroup.modules.affine import batch_det
from affgroup.modules.haarquad import (
    chart_nodes,
    integrate_g1,
    integrate_g2,
    integrate_gl2,
    integrate_lifted,
    lifted_l1,
    nearest_nodes,
    oracle_gl2,
)
from affgroup.modules.studies import haar_study

from .conftest import small_chart


FOCUSED = ChartConfig(
    rho_lo=-1.0, rho_hi=1.0, rho_count=16,
    theta_count=32,
    u_lo=-1.0, u_hi=1.0, u_count=8,
    w_lo=-1.0, w_hi=1.0, w_count=8,
    signs=(1,),
)
"""Chart around the identity resolving a bump of width 0.2."""


def bump(matrices: np.ndarray) -> np.ndarray:
    return GaussianBump(width=0.2)(matrices)


def shifted_bump(matrices: np.ndarray) -> np.ndarray:
    return GaussianBump(center=Mat2(a=1.2, b=-0.3, c=0.1, d=0.8), width=0.25)(matrices)


class TestChart:
    def test_nodes_are_chart_matrices(self, chart):
        nodes = chart_nodes(chart)
        assert nodes.matrices.shape == (chart.size, 2, 2)
        determinants = batch_det(nodes.matrices)
        assert np.allclose(determinants, (nodes.s ** 2 + nodes.t ** 2) * nodes.v)

    def test_partial_ranges(self, chart):
        full = chart_nodes(chart)
        part = chart_nodes(chart, 5, 9)
        assert np.array_equal(part.index, np.arange(5, 9))
        assert np.allclose(part.matrices, full.matrices[5:9])

    def test_stabilizer_weight(self, chart):
        nodes = chart_nodes(chart)
        assert np.allclose(nodes.stabilizer_weight * np.abs(nodes.v), nodes.weight)

    def test_total_measure(self, chart):
        assert math.isclose(chart_nodes(chart).weight.sum(), chart.total_measure)

    def test_nearest_nodes_recovers_nodes(self, chart):
        nodes = chart_nodes(chart)
        index, valid = nearest_nodes(chart, nodes.matrices)
        assert valid.all()
        assert np.array_equal(index, nodes.index)

    def test_nearest_nodes_outside(self, chart):
        matrices = np.stack([10.0 * np.eye(2), np.diag([1.0, -1.0])])
        _, valid = nearest_nodes(chart, matrices)
        assert not valid.any()

    def test_refined(self):
        chart = QuadratureChart().refined(0.5)
        assert chart.shape == (16, 16, 32, 16, 2)


class TestG1:
    def test_separable_gaussian(self):
        value = integrate_g1(lambda y, b: np.exp(-y * y) * np.exp(-(b - 1.0) ** 2) * b * b)
        assert math.isclose(value, math.pi, rel_tol=1e-3)


class TestGL2:
    def test_matches_entry_space_oracle(self):
        chart = FOCUSED.to_chart()
        reference = oracle_gl2(bump, [(0.0, 2.0), (-1.0, 1.0), (-1.0, 1.0), (0.0, 2.0)], (40, 40, 40, 40))
        value = integrate_gl2(bump, chart.refined(2.0))
        assert math.isclose(value, reference, rel_tol=1e-2)

    def test_haar_study_converges(self):
        result = haar_study(RunConfig(chart=FOCUSED))
        assert result.decreasing
        assert result.rows[-1].error < 1e-2

    def test_left_invariance(self, rng):
        chart = FOCUSED.to_chart().refined(1.5)
        reference = integrate_gl2(shifted_bump, chart)
        for _ in range(5):
            g = Mat2.rotation(rng.uniform(-0.3, 0.3)).to_array() * math.exp(rng.uniform(-0.1, 0.1))
            g[1, 0] += rng.uniform(-0.1, 0.1)

            def moved(matrices, g=g):
                return shifted_bump(np.einsum("ij,njk->nik", g, matrices))

            assert math.isclose(integrate_gl2(moved, chart), reference, rel_tol=1e-2)

    def test_truncation_warning(self):
        chart = small_chart(2, 0.05)
        with pytest.warns(ChartTooSmall):
            integrate_gl2(lambda m: np.ones(len(m)), chart)

    def test_no_warning_for_contained_integrand(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error", ChartTooSmall)
            integrate_gl2(bump, FOCUSED.to_chart())

    def test_non_finite_integrand(self, chart):
        with pytest.raises(NonFiniteSample):
            integrate_gl2(lambda m: np.full(len(m), np.nan), chart)

    def test_monotone(self):
        chart = FOCUSED.to_chart()

        def larger(matrices):
            return bump(matrices) + 0.5 * shifted_bump(matrices)

        assert integrate_gl2(larger, chart, boundary_mass_tol=math.inf) >= integrate_gl2(bump, chart)
        assert integrate_gl2(bump, chart) >= integrate_gl2(lambda m: 0.5 * bump(m), chart)

    def test_deterministic_across_chunks(self, chart):
        assert integrate_gl2(bump, chart, chunk=3) == pytest.approx(integrate_gl2(bump, chart, chunk=1000), rel=1e-13)


class TestG2:
    @staticmethod
    def integrand(x: np.ndarray, A: np.ndarray) -> np.ndarray:
        planar = np.exp(-np.sum((x - np.array([0.3, -0.2])) ** 2, axis=-1) / 2.0)
        return planar * shifted_bump(A)

    def test_separable(self):
        chart = FOCUSED.to_chart()
        spatial = GridGeometry.centered((48, 48), 0.25)
        value = integrate_g2(self.integrand, chart, spatial)
        planar = 2.0 * math.pi
        group = integrate_gl2(lambda m: shifted_bump(m) / np.abs(batch_det(m)), chart)
        assert math.isclose(value, planar * group, rel_tol=1e-6)

    def test_left_invariance(self):
        chart = FOCUSED.to_chart().refined(1.5)
        spatial = GridGeometry.centered((64, 64), 0.25)
        reference = integrate_g2(self.integrand, chart, spatial)
        shift = np.array([0.4, 0.1])
        g = Mat2(a=1.05, b=0.1, c=-0.05, d=0.95).to_array()

        def moved(x, A):
            return self.integrand(shift + x @ g.T, np.einsum("ij,...jk->...ik", g, A))

        assert math.isclose(integrate_g2(moved, chart, spatial), reference, rel_tol=1e-2)


class TestLifted:
    def test_integrate_and_l1(self, chart):
        spatial = GridGeometry.centered((4, 4), 0.5)
        values = np.full((chart.size,) + spatial.shape, -2.0)
        F = LiftedSignal(values=values, chart=chart, spatial=spatial)
        nodes = chart_nodes(chart)
        expected = -2.0 * 16 * 0.25 * np.sum(nodes.weight / np.abs(batch_det(nodes.matrices)))
        assert math.isclose(integrate_lifted(F), expected)
        assert math.isclose(lifted_l1(F), -expected)

    def test_rejects_wrong_shape(self, chart):
        with pytest.raises(ValueError):
            LiftedSignal(values=np.zeros((chart.size + 1, 4, 4)), chart=chart, spatial=GridGeometry.centered((4, 4)))

    def test_axis_validation(self):
        with pytest.raises(ValueError):
            ChartAxis(kind=AxisKind.LINEAR, lo=1.0, hi=0.0, count=4)
