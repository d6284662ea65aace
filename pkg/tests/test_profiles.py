import numpy as np
import pytest

from nullasym.exceptions import InvalidInputError
from nullasym.models.geometry import SphereGrid
from nullasym.models.profiles import (
    GaussShape,
    GKernel,
    Lorentz2Shape,
    NullProfile,
    SeparableProfile,
    delta_b,
    extend_homogeneous,
    frequency_split,
    frequency_split_samples,
    get_preset,
    homogeneous_transform,
    incoming,
    limits,
    outgoing,
    s_derivative,
    scaled_g,
    smearing_profile,
    validate_decay,
    wave_packet,
)
from nullasym.utils.quadrature import composite_gauss_legendre

Z = np.array([0.0, 0.0, 1.0])
N1 = np.array([0.6, 0.0, 0.8])


def zeros_like_args(s, n):
    return np.zeros(np.broadcast_shapes(np.shape(s), np.shape(n)[:-1]))


class TestExtension:
    def test_gauge_value(self, tanh_profile):
        l = np.array([1.0, *N1])
        assert extend_homogeneous(tanh_profile, 0.4, l) == pytest.approx(np.tanh(0.4))

    def test_direct_substitution(self, tanh_profile):
        l = 3.0 * np.array([1.0, *N1])
        assert extend_homogeneous(tanh_profile, 3.0, l) == pytest.approx(np.tanh(1.0) / 3.0, rel=1e-14)

    @pytest.mark.parametrize('gamma', [0.5, 2.0, 7.0])
    def test_homogeneity(self, gamma, tanh_profile, smearing):
        l = 1.7 * np.array([1.0, 0.0, 0.6, -0.8])
        for profile in (tanh_profile, smearing):
            base = extend_homogeneous(profile, 0.9, l)
            scaled = extend_homogeneous(profile, gamma * 0.9, gamma * l)
            assert scaled == pytest.approx(gamma ** profile.degree * base, rel=1e-12)

    def test_rejects_non_null(self, tanh_profile):
        with pytest.raises(InvalidInputError):
            extend_homogeneous(tanh_profile, 0.0, np.array([1.0, 0.0, 0.0, 0.9]))

    def test_transform_scaling_degree_minus_two(self, smearing):
        l = 1.3 * np.array([1.0, *N1])
        omega = np.array([0.2, 0.7, 1.5])
        mu = 2.0
        lhs = homogeneous_transform(smearing, omega / mu, mu * l)
        rhs = homogeneous_transform(smearing, omega, l) / mu
        assert lhs == pytest.approx(rhs, rel=1e-13)


class TestDerivatives:
    def test_zero_order_is_identity(self, tanh_profile):
        assert s_derivative(tanh_profile, 0) is tanh_profile

    def test_tanh_first_derivative(self, tanh_profile):
        s = np.linspace(-4, 4, 17)
        d = s_derivative(tanh_profile, 1)
        assert d(s, Z) == pytest.approx(1.0 / np.cosh(s) ** 2, abs=1e-14)
        assert d.degree == tanh_profile.degree - 1

    def test_gaussian_second_derivative_at_origin(self):
        p = SeparableProfile(GaussShape(), lam=1.0 / np.sqrt(2.0))
        assert s_derivative(p, 2)(0.0, Z) == pytest.approx(-2.0, abs=1e-14)

    def test_composition(self):
        p = get_preset('arctan_angular').profile
        s = np.linspace(-3, 3, 13)
        composed = s_derivative(s_derivative(p, 1), 2)
        assert composed(s, N1) == pytest.approx(s_derivative(p, 3)(s, N1), abs=1e-12)

    def test_finite_difference_fallback(self):
        p = NullProfile(lambda s, n: np.sin(s) * np.ones(np.shape(n)[:-1]), eps=1.0)
        s = np.linspace(-2, 2, 9)
        assert s_derivative(p, 2)(s, Z) == pytest.approx(-np.sin(s), abs=1e-6)

    def test_lorentz2_derivative(self):
        x = np.linspace(-3, 3, 11)
        assert Lorentz2Shape().derivative(1, x) == pytest.approx(-4 * x / (1 + x ** 2) ** 3, abs=1e-14)

    def test_tanh_transform_matches_quadrature(self, tanh_profile):
        bdot = NullProfile(tanh_profile.derivative(1), eps=3.0)
        omega = np.array([0.0, 0.5, 2.0])
        assert bdot.transform(omega, Z) == pytest.approx(tanh_profile.transform_derivative(omega, Z), abs=1e-10)

    def test_packet_transform_matches_quadrature(self):
        packet = wave_packet(1.0, 8.0)
        generic = NullProfile(packet.evaluator, eps=3.0, lam=packet.lam)
        omega = np.array([0.0, 0.5, 1.0, 1.2])
        assert generic.transform(omega, Z) == pytest.approx(packet.transform(omega, Z), abs=1e-8)


class TestDeltaB:
    def test_tanh(self, tanh_profile):
        assert delta_b(tanh_profile, Z) == pytest.approx(2.0, abs=1e-10)

    def test_even_profile(self):
        assert delta_b(get_preset('gauss_bump').profile, N1) == pytest.approx(0.0, abs=1e-10)

    def test_arctan_with_angular_factor(self):
        p = get_preset('arctan_angular').profile
        n = np.array([[0.0, 0.0, 1.0], [0.6, 0.0, -0.8]])
        assert delta_b(p, n) == pytest.approx(np.pi * (1 + 0.5 * n[:, 2]), abs=1e-9)

    def test_non_integrable_rejected(self):
        p = NullProfile(lambda s, n: s, eps=0.0)
        with pytest.raises(InvalidInputError):
            delta_b(p, Z)

    def test_limits_and_splits(self):
        p = get_preset('arctan_angular').profile
        lo, hi = limits(p, N1)
        a = 1 + 0.5 * N1[2]
        assert lo == pytest.approx(-0.5 * np.pi * a)
        assert hi == pytest.approx(0.5 * np.pi * a)
        assert outgoing(p)(1e9, N1) == pytest.approx(0.0, abs=1e-8)
        assert incoming(p)(-1e9, N1) == pytest.approx(0.0, abs=1e-8)
        assert outgoing(p)(-1e9, N1) == pytest.approx(-np.pi * a, abs=1e-8)

    def test_limits_by_quadrature(self):
        p = NullProfile(lambda s, n: np.tanh(s) * np.ones(np.shape(n)[:-1]), eps=3.0,
                        derivatives=[lambda s, n: np.tanh(s),
                                     lambda s, n: (1.0 - np.tanh(s) ** 2) * np.ones(np.shape(n)[:-1])])
        lo, hi = limits(p, Z)
        assert float(lo) == pytest.approx(-1.0, abs=1e-9)
        assert float(hi) == pytest.approx(1.0, abs=1e-9)


class TestFrequencySplit:
    def test_halves_sum_to_profile(self):
        p = get_preset('gauss_bump').profile
        s = np.linspace(-6, 6, 41)
        plus = frequency_split(p, +1)
        minus = frequency_split(p, -1)
        assert plus(s, N1) + minus(s, N1) == pytest.approx(p(s, N1), abs=1e-8)

    def test_symmetric_spectrum_halves_origin(self):
        p = SeparableProfile(GaussShape())
        plus = frequency_split(p, +1)
        assert plus(0.0, Z) == pytest.approx(0.5, abs=1e-8)

    def test_projection(self, tanh_profile):
        f = s_derivative(tanh_profile, 3)
        once = frequency_split(f, +1)
        twice = frequency_split(once, +1)
        s = np.linspace(-10, 10, 21)
        assert twice(s, Z) == pytest.approx(once(s, Z), abs=1e-8)

    def test_positive_part_decay(self, tanh_profile):
        f = s_derivative(tanh_profile, 3)
        plus = frequency_split(f, +1)
        s = np.linspace(-32, 32, 257)
        bound = np.abs(plus(s, Z)) * (1.0 + np.abs(s)) ** 2
        assert np.max(bound) < 20.0
        assert np.max(bound[np.abs(s) > 16]) < np.max(bound)

    def test_tail_mass_reported(self, caplog):
        rough = NullProfile(lambda s, n: np.sign(s) * (np.abs(s) < 1), eps=1.0)
        samples = frequency_split_samples(rough, +1, 0.0, Z, s_max=8.0, points=256)
        assert samples.tail_mass > 1e-8
        assert 'tail mass' in caplog.text

    def test_energy_weight_spectrum(self, smearing):
        split = frequency_split(smearing, +1, k=1.0)
        omega = np.array([-1.0, 0.0, 2.0])
        expected = np.array([0.0, 0.0, -1j * 2.0 * smearing.transform(2.0, Z)])
        assert split.transform(omega, Z) == pytest.approx(expected, abs=1e-15)

    def test_bad_arguments(self, smearing):
        with pytest.raises(InvalidInputError):
            frequency_split(smearing, 0)
        with pytest.raises(InvalidInputError):
            frequency_split(smearing, +1, k=-1.0)


class TestDecayValidation:
    directions = SphereGrid.product(4).nodes

    def test_zero_profile(self):
        report = validate_decay(NullProfile(zeros_like_args, eps=1.0), directions=self.directions)
        assert report.worst == 0.0
        assert report.ok

    def test_self_oracle(self):
        eps, lam = 1.0, 1.0

        def f(s, n):
            return (lam ** 2 + s ** 2) ** (-(1 + eps) / 2) * np.ones(np.shape(n)[:-1])

        constants = {(0, 0): 2 ** ((1 + eps) / 2), (0, 1): (1 + eps) * 2 ** ((2 + eps) / 2)}
        p = NullProfile(f, eps=eps, lam=lam, degree=-2, decay_constants=constants)
        report = validate_decay(p, m_max=1, directions=self.directions)
        assert report.ok
        assert report.ratios[(0, 0)] <= 1.05 * constants[(0, 0)]

    def test_constant_is_flagged(self):
        p = NullProfile(lambda s, n: np.ones(np.broadcast_shapes(np.shape(s), np.shape(n)[:-1])),
                        eps=1.0, decay_constants={(0, 0): 1.0})
        report = validate_decay(p, m_max=0, directions=self.directions, angular_orders=0)
        assert (0, 0) in report.flagged


class TestKernels:
    def test_normalization(self):
        g = GKernel()
        x, w = composite_gauss_legendre(np.linspace(g.tau1, g.tau2, 41), 20)
        assert np.sum(w * g(x)) == pytest.approx(1.0, abs=1e-10)
        assert g.transform(0.0) == pytest.approx(1.0 / (2 * np.pi), abs=1e-14)

    def test_support_must_be_positive(self):
        with pytest.raises(InvalidInputError):
            GKernel(-0.5, 1.0)

    def test_eta_one_substitution(self):
        g = GKernel()
        R = 12.0
        kernel = scaled_g(g, R, 1.0)
        r = np.linspace(5.0, 20.0, 31)
        assert kernel(r) == pytest.approx(g(r / R) / R, abs=1e-12)

    @pytest.mark.parametrize('R,eta', [(4.0, 1.0), (10.0, 0.5), (50.0, 0.25), (200.0, 0.75)])
    def test_unit_integral(self, R, eta):
        kernel = scaled_g(GKernel(), R, eta)
        lo, hi = kernel.support
        x, w = composite_gauss_legendre(np.linspace(lo, hi, 41), 20)
        assert np.sum(w * kernel(x)) == pytest.approx(1.0, abs=1e-10)

    def test_fourier_side(self):
        kernel = scaled_g(GKernel(), 10.0, 0.5)
        lo, hi = kernel.support
        x, w = composite_gauss_legendre(np.linspace(lo, hi, 81), 20)
        for u in (0.0, 0.3, 1.0, 2.5, 4.0):
            direct = np.sum(w * np.exp(1j * u * x) * kernel(x)) / (2 * np.pi)
            assert kernel.transform(u) == pytest.approx(direct, abs=1e-8)

    def test_rejections(self):
        g = GKernel()
        with pytest.raises(InvalidInputError):
            scaled_g(g, 10.0, 0.0)
        with pytest.raises(InvalidInputError):
            scaled_g(g, 10.0, 1.5)
        with pytest.raises(InvalidInputError):
            scaled_g(g, 0.5, 1.0)


class TestPresets:
    def test_unknown_name(self):
        with pytest.raises(InvalidInputError):
            get_preset('sawtooth')

    def test_compact_pair_disjoint(self, sphere_grid):
        north, south = get_preset('compact_angular_pair').profiles
        overlap = north.angular(sphere_grid.nodes) * south.angular(sphere_grid.nodes)
        assert np.all(overlap == 0.0)
        assert north.angular(Z) == pytest.approx(1.0)

    def test_smearing_profile_decay_constant(self):
        report = validate_decay(smearing_profile(), m_max=0, directions=SphereGrid.product(4).nodes,
                                angular_orders=0)
        assert report.ratios[(0, 0)] == pytest.approx(4.0, rel=1e-3)
