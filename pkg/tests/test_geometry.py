import logging

import numpy as np
import pytest

from nullasym.exceptions import InvalidInputError
from nullasym.models.geometry import (
    ETA,
    LORENTZ_GENERATORS,
    Boost,
    FourVector,
    NullDirection,
    REST_FRAME,
    SphereGrid,
    angular_momentum_action,
    boost_apply,
    gauge_weights,
    invariant_sphere_integral,
    lightcone_vector,
    lorentz_generator_action,
    minkowski_dot,
    regauge,
    surface_laplacian,
)


def boosted_frame(chi, axis=(0.0, 0.0, 1.0)):
    return Boost(chi, axis).frame()


class TestBoost:
    def test_zero_rapidity_is_identity(self):
        x = FourVector([1.5, -0.2, 0.3, 0.7])
        assert boost_apply(Boost(0.0), x) == x

    def test_rest_vector_along_axis(self):
        chi = 0.8
        y = boost_apply(Boost(chi), REST_FRAME)
        assert y.components == pytest.approx([np.cosh(chi), 0.0, 0.0, np.sinh(chi)], abs=1e-14)
        assert y.square() == pytest.approx(1.0, abs=1e-12)

    def test_matrix_preserves_metric(self, rng):
        for _ in range(20):
            axis = rng.normal(size=3)
            m = Boost(rng.uniform(-2, 2), axis).matrix
            assert np.max(np.abs(m.T @ ETA @ m - ETA)) < 1e-12

    def test_squares_preserved_for_random_inputs(self, rng):
        for _ in range(1000):
            x = FourVector(rng.normal(size=4))
            y = boost_apply(Boost(0.5, rng.normal(size=3)), x)
            assert y.square() == pytest.approx(x.square(), rel=1e-12, abs=1e-12)

    def test_from_frame_round_trip(self):
        t = boosted_frame(0.7, (1.0, 1.0, 0.0))
        assert Boost.from_frame(t).frame().components == pytest.approx(t.components, abs=1e-13)

    def test_from_frame_rejects_spacelike(self):
        with pytest.raises(InvalidInputError):
            Boost.from_frame([0.1, 1.0, 0.0, 0.0])

    def test_zero_axis_rejected(self):
        with pytest.raises(InvalidInputError):
            Boost(0.3, (0.0, 0.0, 0.0))


class TestFourVector:
    def test_wrong_shape_rejected(self):
        with pytest.raises(InvalidInputError):
            FourVector([1.0, 2.0, 3.0])

    def test_light_cone_coordinates(self):
        p = FourVector([5.0, 0.0, 3.0, 4.0])
        assert p.plus() == pytest.approx(10.0)
        assert p.minus() == pytest.approx(0.0)
        assert p.hat_plus().square() == pytest.approx(0.0, abs=1e-15)
        assert p.hat_minus().spatial == pytest.approx([0.0, -0.6, -0.8])

    def test_arithmetic(self):
        a = FourVector([1.0, 0.0, 0.0, 1.0])
        b = FourVector([1.0, 0.0, 0.0, -1.0])
        assert (a + b).components == pytest.approx([2.0, 0.0, 0.0, 0.0])
        assert (2 * a).dot(b) == pytest.approx(4.0)


class TestLightcone:
    def test_gauge_normalization_in_boosted_frame(self, rng):
        t = boosted_frame(0.9, (0.3, -0.4, 0.5))
        n = rng.normal(size=(50, 3))
        n /= np.linalg.norm(n, axis=1, keepdims=True)
        l = lightcone_vector(n, t)
        assert np.allclose(minkowski_dot(t.components, l), 1.0, atol=1e-13)
        assert np.allclose(minkowski_dot(l, l), 0.0, atol=1e-12)

    def test_non_unit_direction_rejected(self):
        with pytest.raises(InvalidInputError):
            NullDirection([1.0, 0.0, 0.1])


class TestRegauge:
    def test_same_frame_is_identity(self):
        l = NullDirection([0.0, 0.6, 0.8])
        new, weight = regauge(l, REST_FRAME)
        assert weight == pytest.approx(1.0)
        assert new.n_hat == pytest.approx(l.n_hat)

    @pytest.mark.parametrize('chi', [0.3, 1.2])
    def test_weight_along_boost_axis(self, chi):
        t = boosted_frame(chi)
        _, weight = regauge(NullDirection([0.0, 0.0, 1.0]), t)
        assert weight == pytest.approx(np.exp(2 * chi), rel=1e-12)
        _, weight = regauge(NullDirection([0.0, 0.0, -1.0]), t)
        assert weight == pytest.approx(np.exp(-2 * chi), rel=1e-12)

    def test_rejects_spacelike_frame(self):
        with pytest.raises(InvalidInputError):
            regauge(NullDirection([1.0, 0.0, 0.0]), FourVector([0.5, 1.0, 0.0, 0.0]))


class TestSphereIntegrals:
    def test_weights_total(self):
        assert SphereGrid.product(64).total_weight() == pytest.approx(4 * np.pi, abs=1e-10)

    def test_polynomial_exactness(self, sphere_grid):
        n = sphere_grid.nodes
        assert sphere_grid.integrate(n[:, 2] ** 2) == pytest.approx(4 * np.pi / 3, abs=1e-12)
        assert sphere_grid.integrate(n[:, 0] ** 2 * n[:, 1] ** 2) == pytest.approx(4 * np.pi / 15, abs=1e-12)

    def test_composite_rule_total(self):
        grid = SphereGrid.composite(np.linspace(-1, 1, 9), 8, 64, axis=(1.0, 0.0, 0.0))
        assert grid.total_weight() == pytest.approx(4 * np.pi, abs=1e-10)

    def test_unit_integrand(self, sphere_grid):
        value = invariant_sphere_integral(lambda l: minkowski_dot(np.array([1.0, 0, 0, 0]), l) ** -2, sphere_grid)
        assert value == pytest.approx(4 * np.pi, abs=1e-12)

    @pytest.mark.parametrize('chi', [0.25, 0.5, 1.0])
    def test_same_value_in_boosted_frame(self, chi):
        grid = SphereGrid.product(64)
        t = boosted_frame(chi, (0.0, 1.0, 0.0))
        value = invariant_sphere_integral(lambda l: l[:, 0] ** -2, grid, t)
        assert value == pytest.approx(4 * np.pi, rel=1e-8)

    def test_gauge_reweighting_is_exact(self, sphere_grid):
        t_new = boosted_frame(0.6, (1.0, 0.0, 1.0))

        def f(l):
            return l[:, 0] ** -3 * (l[:, 0] + 0.3 * l[:, 1])

        direct = invariant_sphere_integral(f, sphere_grid)
        l_new, w_new = gauge_weights(sphere_grid, t_new)
        assert np.sum(f(l_new) * w_new) == pytest.approx(direct, rel=1e-13)

    def test_boosted_dipole_closed_form(self):
        chi = 0.7
        t_prime = boosted_frame(chi).components
        value = invariant_sphere_integral(lambda l: l[:, 0] ** -3 * minkowski_dot(t_prime, l),
                                          SphereGrid.product(64))
        assert value == pytest.approx(4 * np.pi * np.cosh(chi), abs=1e-10)

    def test_non_finite_reported(self, sphere_grid, caplog):
        with caplog.at_level(logging.WARNING):
            value = invariant_sphere_integral(lambda l: 1.0 / (l[:, 3] - l[:, 3]), sphere_grid)
        assert np.isnan(value)
        assert 'non-finite integrand' in caplog.text

    @pytest.mark.parametrize('a,b', LORENTZ_GENERATORS)
    def test_generators_integrate_to_zero(self, a, b, rng, sphere_grid):
        l = sphere_grid.lightcone()
        for _ in range(20 // len(LORENTZ_GENERATORS) + 1):
            c = rng.normal(scale=0.5, size=3)

            def g(L, _c=c):
                return L[..., 0] ** -2 * np.exp(L[..., 1:] @ _c / L[..., 0])

            values = lorentz_generator_action(g, a, b, l)
            assert abs(sphere_grid.integrate(values)) < 1e-9


class TestSurfaceLaplacian:
    points = np.array([
        [0.0, 0.0, 1.0],
        [0.01, 0.0, np.sqrt(1 - 1e-4)],
        [0.6, 0.0, 0.8],
        [0.36, 0.48, -0.8],
        [1.0, 0.0, 0.0],
    ])

    def test_constant(self):
        assert surface_laplacian(lambda n: np.ones(len(n)), self.points) == pytest.approx(np.zeros(5), abs=1e-9)

    def test_dipole_eigenfunction(self):
        result = surface_laplacian(lambda n: n[:, 2], self.points)
        assert result == pytest.approx(-2 * self.points[:, 2], abs=1e-5)

    def test_quadrupole_eigenfunction(self):
        result = surface_laplacian(lambda n: n[:, 0] * n[:, 1], self.points)
        assert result == pytest.approx(-6 * self.points[:, 0] * self.points[:, 1], abs=1e-5)

    def test_analytic_short_circuit(self):
        result = surface_laplacian(None, self.points, analytic=lambda n: -2 * n[:, 2])
        assert result == pytest.approx(-2 * self.points[:, 2])


def test_angular_momentum_of_dipole():
    n = np.array([[0.6, 0.0, 0.8], [0.0, 1.0, 0.0]])
    result = angular_momentum_action(lambda x: x[..., 2], n)
    assert result == pytest.approx(np.cross(n, [0.0, 0.0, 1.0]), abs=1e-9)
