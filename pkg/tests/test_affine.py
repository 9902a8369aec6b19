"""Tests for affine group arithmetic and the Iwasawa chart."""
import math

import numpy as np
import pytest

from affgroup.errors import InvalidChartPoint, SingularMatrix
from affgroup.models.group import AffineElement, IwasawaFactors, Mat2
from affgroup.modules.affine import (
    apply,
    batch_inverse,
    chart_from_matrices,
    compose,
    from_chart,
    invert,
    iwasawa,
    matmul,
    matrices_from_chart,
)


def random_matrix(rng: np.random.Generator) -> Mat2:
    """Random matrix with |det| in [1e-3, 1e3]."""
    while True:
        m = rng.normal(size=(2, 2)) * 10.0 ** rng.uniform(-1.5, 1.5)
        if 1e-3 <= abs(np.linalg.det(m)) <= 1e3:
            return Mat2.from_array(m)


def random_element(rng: np.random.Generator) -> AffineElement:
    return AffineElement(x=tuple(rng.normal(size=2)), A=random_matrix(rng))


def close(m: Mat2, n: Mat2, tol: float = 1e-10) -> bool:
    scale = max(1.0, float(np.max(np.abs(n.to_array()))))
    return float(np.max(np.abs(m.to_array() - n.to_array()))) <= tol * scale


class TestIwasawa:
    def test_reconstruction(self, rng):
        for _ in range(1000):
            m = random_matrix(rng)
            factors = iwasawa(m)
            assert close(matmul(factors.M, factors.C), m)

    def test_chart_round_trip(self, rng):
        for _ in range(1000):
            m = random_matrix(rng)
            f = iwasawa(m)
            assert close(from_chart(f.s, f.t, f.u, f.v), m)

    def test_identity(self):
        f = iwasawa(Mat2.identity())
        assert (f.s, f.t, f.u, f.v) == (1.0, 0.0, 0.0, 1.0)

    def test_rotation_has_no_shear(self):
        f = iwasawa(Mat2.rotation(0.7))
        assert math.isclose(f.theta, 0.7, abs_tol=1e-12)
        assert math.isclose(f.rho, 0.0, abs_tol=1e-12)
        assert abs(f.u) < 1e-12
        assert math.isclose(f.v, 1.0)

    def test_reflection_lands_on_negative_branch(self):
        f = iwasawa(Mat2(a=1.0, b=0.0, c=0.0, d=-1.0))
        assert f.sign == -1
        assert close(matmul(f.M, f.C), Mat2(a=1.0, b=0.0, c=0.0, d=-1.0))

    def test_determinant_factorizes(self, rng):
        m = random_matrix(rng)
        f = iwasawa(m)
        assert math.isclose((f.s ** 2 + f.t ** 2) * f.v, m.det, rel_tol=1e-10)

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            iwasawa(Mat2(a=1.0, b=2.0, c=2.0, d=4.0))

    @pytest.mark.parametrize("point", [(0.0, 0.0, 1.0, 1.0), (1.0, 0.0, 0.0, 0.0)])
    def test_invalid_chart_point(self, point):
        with pytest.raises(InvalidChartPoint):
            from_chart(*point)

    def test_vectorized_maps_agree(self, rng):
        matrices = np.stack([random_matrix(rng).to_array() for _ in range(50)])
        s, t, u, v = chart_from_matrices(matrices)
        assert np.allclose(matrices_from_chart(s, t, u, v), matrices, rtol=1e-10, atol=1e-12)
        for m, coordinates in zip(matrices, zip(s, t, u, v)):
            f = iwasawa(Mat2.from_array(m))
            assert np.allclose(coordinates, (f.s, f.t, f.u, f.v), rtol=1e-12, atol=1e-12)

    def test_polar_coordinates(self):
        f = IwasawaFactors(s=-1.0, t=-1.0, u=0.3, v=-2.0)
        assert math.isclose(f.rho, 0.5 * math.log(2.0))
        assert math.isclose(f.theta, 1.25 * math.pi)
        assert math.isclose(f.w, math.log(2.0))
        assert f.sign == -1


class TestGroupLaw:
    def test_inverse(self, rng):
        for _ in range(100):
            g = random_element(rng)
            product = compose(g, invert(g))
            assert np.allclose(product.x, (0.0, 0.0), atol=1e-9)
            assert close(product.A, Mat2.identity(), 1e-9)

    def test_associativity(self, rng):
        g, h, k = (random_element(rng) for _ in range(3))
        left = compose(compose(g, h), k)
        right = compose(g, compose(h, k))
        assert np.allclose(left.x, right.x, rtol=1e-10, atol=1e-10)
        assert close(left.A, right.A, 1e-10)

    def test_action_is_a_homomorphism(self, rng):
        g, h = random_element(rng), random_element(rng)
        z = rng.normal(size=(10, 2))
        assert np.allclose(apply(compose(g, h), z), apply(g, apply(h, z)), rtol=1e-9, atol=1e-9)

    def test_identity_element(self, rng):
        g = random_element(rng)
        assert compose(AffineElement.identity(), g) == g

    def test_invert_singular(self):
        with pytest.raises(SingularMatrix):
            invert(AffineElement(A=Mat2.scaling(0.0)))

    def test_batch_inverse_singular(self):
        stack = np.stack([np.eye(2), np.zeros((2, 2))])
        with pytest.raises(SingularMatrix):
            batch_inverse(stack)

    def test_to_json(self):
        g = AffineElement(x=(1.0, -2.0), A=Mat2.rotation(0.0))
        assert g.to_json() == {"x": [1.0, -2.0], "A": [[1.0, -0.0], [0.0, 1.0]]}
