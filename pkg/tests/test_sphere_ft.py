import numpy as np
import pytest

from nullasym.exceptions import InvalidInputError, ResolutionError
from nullasym.models.geometry import SphereGrid, angular_momentum_action, surface_laplacian
from nullasym.models.profiles import dipole_angular, smearing_profile
from nullasym.physics.sphere_ft import (
    SphereFunction,
    boundary_expansion,
    component_function,
    constant_function,
    expansion_terms,
    harmonic_sum,
    measure_transform_check,
    position_bound,
    random_band_limited,
    remainder_consistency,
    remainder_momentum,
    remainder_position,
    required_order,
    sphere_fourier,
)
from nullasym.utils.helpers import random_unit_vectors


def n3_transform(a):
    return 4j * np.pi * (a * np.cos(a) - np.sin(a)) / a ** 2


class TestSphereFunction:
    def test_rejects_non_finite_values(self):
        with pytest.raises(InvalidInputError):
            SphereFunction(lambda n: np.where(n[..., 2] > 0, np.inf, 1.0), name='broken')

    def test_rejects_non_null_harmonic_vectors(self):
        with pytest.raises(InvalidInputError):
            harmonic_sum([[1.0, 0.0, 0.0]], [1.0], [2])

    def test_harmonic_closed_forms_match_differences(self, rng):
        f = random_band_limited(rng)
        nodes = SphereGrid.product(6).nodes
        numeric = surface_laplacian(f.evaluator, nodes)
        assert f.laplacian_at(nodes) == pytest.approx(numeric, rel=1e-4, abs=1e-4)
        assert f.angular_momentum_at(nodes) == pytest.approx(
            angular_momentum_action(f.evaluator, nodes), abs=1e-8)

    def test_laplacian_sup_of_component(self):
        assert component_function().laplacian_sup == pytest.approx(2.0)


class TestSphereFourier:
    def test_zero_momentum_is_the_plain_integral(self):
        assert sphere_fourier(constant_function(), [0.0, 0.0, 0.0]) == pytest.approx(4 * np.pi)
        assert abs(sphere_fourier(component_function(), [0.0, 0.0, 0.0])) < 1e-13

    @pytest.mark.parametrize('q', [[0.0, 0.0, 1.0], [0.3, -2.0, 1.1], [7.0, 0.0, 0.0]])
    def test_constant_function(self, q):
        k = np.linalg.norm(q)
        assert sphere_fourier(constant_function(), q) == pytest.approx(4 * np.pi * np.sin(k) / k, abs=1e-12)

    @pytest.mark.parametrize('a', [1.0, np.pi, 10.0])
    def test_component_along_momentum(self, a):
        assert sphere_fourier(component_function(), [0.0, 0.0, a]) == pytest.approx(n3_transform(a), abs=1e-12)

    def test_tilted_component(self):
        axis = np.array([1.0, 2.0, -2.0]) / 3.0
        value = sphere_fourier(component_function(axis), 4.0 * axis)
        assert value == pytest.approx(n3_transform(4.0), abs=1e-12)

    def test_insufficient_order_reports_requirement(self):
        with pytest.raises(ResolutionError) as info:
            sphere_fourier(constant_function(), [0.0, 0.0, 100.0], order=64)
        assert info.value.required_order == required_order(100.0) == 400

    def test_unsupported_frequency(self):
        with pytest.raises(ResolutionError):
            sphere_fourier(constant_function(), [0.0, 0.0, 2000.0])


class TestBoundaryExpansion:
    def test_constant_function_is_exact(self):
        f = constant_function()
        q = [0.4, 1.0, -2.0]
        k = np.linalg.norm(q)
        assert boundary_expansion(f, q) == pytest.approx(4 * np.pi * np.sin(k) / k, abs=1e-13)
        assert remainder_momentum(f, q) == 0

    def test_component_at_pi(self):
        assert boundary_expansion(component_function(), [0.0, 0.0, np.pi]) == pytest.approx(-4j, abs=1e-13)

    def test_zero_momentum_rejected(self):
        with pytest.raises(InvalidInputError):
            boundary_expansion(constant_function(), [0.0, 0.0, 0.0])

    def test_large_momentum_difference_is_small(self):
        f = component_function()
        q = [0.0, 0.0, 50.0]
        difference = sphere_fourier(f, q) - boundary_expansion(f, q)
        assert abs(difference) <= 2 * np.pi ** 2 / 50.0
        assert difference == pytest.approx(-4j * np.pi * np.sin(50.0) / 2500.0, abs=1e-10)


class TestRemainderMomentum:
    @pytest.mark.parametrize('a', [1.0, np.pi, 10.0])
    def test_component_identity(self, a):
        f = component_function()
        q = [0.0, 0.0, a]
        assert remainder_momentum(f, q) == pytest.approx(-4j * np.pi * np.sin(a) / a ** 2, abs=1e-9)
        assert remainder_consistency(f, q) <= 1e-7

    def test_component_off_axis(self):
        q = np.array([2.0, -1.0, 0.5])
        assert remainder_consistency(component_function(), q) <= 1e-7

    def test_band_limited_random_momenta(self, rng):
        f = random_band_limited(rng)
        directions = random_unit_vectors(rng, 20)
        sizes = rng.uniform(0.5, 10.0, size=20)
        for q in directions * sizes[:, None]:
            assert remainder_consistency(f, q) <= 1e-6

    def test_terms_add_up(self):
        terms = expansion_terms(component_function(), [0.0, 0.0, 3.0])
        assert terms.direct == pytest.approx(terms.boundary + terms.remainder, abs=1e-8)
        assert terms.residual <= 1e-8

    def test_zero_momentum_rejected(self):
        with pytest.raises(InvalidInputError):
            remainder_momentum(component_function(), [0.0, 0.0, 0.0])


class TestRemainderPosition:
    def test_inside_unit_ball_is_zero(self):
        assert remainder_position(component_function(), [0.0, 0.0, 0.5]) == 0.0

    @pytest.mark.parametrize('z', [1.01, 1.5, 3.0, 25.0])
    def test_component_cap_integral(self, z):
        assert remainder_position(component_function(), [0.0, 0.0, z]) == pytest.approx(2 * np.pi / z ** 2, abs=1e-10)

    def test_component_oblique(self):
        m = np.array([0.6, 0.0, 0.8])
        value = remainder_position(component_function(), 2.0 * m)
        assert value == pytest.approx(2 * np.pi * 0.8 / 4.0, abs=1e-10)

    def test_singular_sphere_rejected(self):
        with pytest.raises(InvalidInputError):
            remainder_position(component_function(), [0.0, 0.0, 1.0 + 1e-7])

    def test_bound_on_component(self, rng):
        f = component_function()
        radii = np.geomspace(1.001, 20.0, 100)
        for z in random_unit_vectors(rng, 100) * radii[:, None]:
            assert position_bound(f, z).ok

    def test_bound_on_band_limited(self, rng):
        f = random_band_limited(rng)
        radii = np.geomspace(1.001, 20.0, 100)
        results = [position_bound(f, z) for z in random_unit_vectors(rng, 100) * radii[:, None]]
        assert all(result.ok for result in results)
        assert max(abs(r.value) for r in results) > 0

    def test_bound_is_zero_inside(self):
        result = position_bound(component_function(), [0.2, 0.0, 0.0])
        assert result.value == 0.0
        assert result.bound == 0.0
        assert result.ok


class TestMeasureTransform:
    def test_phase_terms_plus_rest(self):
        f = smearing_profile(angular=dipole_angular(0.5))
        check = measure_transform_check(f, x0=20.5, r=20.0, p=[0.3, 0.2, 0.9])
        assert check.residual <= 1e-7
        assert abs(check.boundary) > abs(check.remainder)

    def test_isotropic_rest_vanishes(self):
        check = measure_transform_check(smearing_profile(), x0=21.0, r=20.0, p=[0.0, 0.5, 0.0])
        assert abs(check.remainder) < 1e-12
        assert check.direct == pytest.approx(check.boundary, abs=1e-10)

    def test_rejects_bad_arguments(self):
        f = smearing_profile()
        with pytest.raises(InvalidInputError):
            measure_transform_check(f, 0.0, 0.0, [1.0, 0.0, 0.0])
        with pytest.raises(InvalidInputError):
            measure_transform_check(f, 0.0, 10.0, [0.0, 0.0, 0.0])
