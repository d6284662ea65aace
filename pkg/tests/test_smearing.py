import numpy as np
import pytest
from scipy import integrate

from nullasym.exceptions import InvalidInputError
from nullasym.models.geometry import Boost
from nullasym.models.profiles import (
    GaussShape,
    GKernel,
    Lorentz2Shape,
    NullProfile,
    SeparableProfile,
    TanhShape,
    dipole_angular,
    frequency_split,
    get_preset,
    outgoing,
    scaled_g,
    smearing_profile,
)
from nullasym.physics.classical_field import ConstantField, MomentumProfile, PlaneWave, SphericalWave
from nullasym.physics.smearing import (
    SmearKernel,
    asymptote_functional,
    deriv_identity_residual,
    frame_change_derivative,
    frame_derivative_order,
    frame_derivative_residual,
    lorentz_invariance_check,
    momentum_limit,
    momentum_side_smear,
    outgoing_derivative_decay,
    pairing,
    smear_g,
    smear_r,
    wrong_term,
)
from nullasym.utils.extrapolation import extrapolate_in_r, scaling_exponent


def f0(s):
    return (1.0 + s * s) ** -2


def spherical_oracle(r):
    """-2∫[tanh(s + 2r) - tanh(s)] f₀(s) ds, the isotropic smearing of the tanh spherical wave."""
    def integrand(s):
        return -2.0 * (np.tanh(s + 2 * r) - np.tanh(s)) * f0(s)

    edge = 2 * r + 50.0
    parts = [
        integrate.quad(integrand, -np.inf, -edge, epsabs=1e-14)[0],
        integrate.quad(integrand, -edge, 50.0, points=[-2 * r, 0.0], limit=400, epsabs=1e-14)[0],
        integrate.quad(integrand, 50.0, np.inf, epsabs=1e-14)[0],
    ]
    return sum(parts)


def tanh_limit():
    """(1/2π)·4π∫(tanh s - 1) f₀(s) ds"""
    value, _ = integrate.quad(lambda s: (np.tanh(s) - 1.0) * f0(s), -np.inf, np.inf, epsabs=1e-14)
    return 2.0 * value


def zero_smearing():
    return SeparableProfile(Lorentz2Shape(), amplitude=0.0, degree=-2)


class TestSmearR:
    def test_zero_smearing(self, tanh_profile):
        assert smear_r(SphericalWave(tanh_profile), 20.0, zero_smearing(), n_theta=4) == pytest.approx(0.0, abs=1e-15)

    def test_spherical_wave_oracle(self, tanh_profile, smearing):
        value = smear_r(SphericalWave(tanh_profile), 30.0, smearing, n_theta=4)
        assert value == pytest.approx(spherical_oracle(30.0), abs=1e-7)

    def test_null_data_path_matches_oracle(self, tanh_profile, smearing):
        assert smear_r(tanh_profile, 30.0, smearing) == pytest.approx(spherical_oracle(30.0), abs=1e-7)

    def test_plane_wave_closed_form(self, smearing):
        k0, r = 0.5, 20.0
        wave = PlaneWave([k0, 0.0, 0.0, k0])
        kappa = k0 * r
        f_tilde = (1 + k0) * np.exp(-k0) / 4.0
        expected = 4 * np.pi * f_tilde * np.exp(-1j * kappa) * np.sin(kappa) / k0
        assert smear_r(wave, r, smearing, n_theta=32, s_core=200.0) == pytest.approx(expected, abs=1e-6)

    def test_anisotropic_data_converges_to_limit(self):
        p = get_preset('gauss_bump').profile
        f = smearing_profile(angular=dipole_angular(0.4, (1.0, 0.0, 1.0)))
        radii = [20.0, 40.0, 80.0, 160.0]
        values = [smear_r(p, r, f, n_theta=16) for r in radii]
        fit = extrapolate_in_r(radii, values, 3)
        assert fit.limit == pytest.approx(asymptote_functional(p, f, n_theta=16), abs=1e-4)

    def test_rejects_nonpositive_radius(self, tanh_profile, smearing):
        with pytest.raises(InvalidInputError):
            smear_r(SphericalWave(tanh_profile), 0.0, smearing)

    def test_null_data_path_needs_separable_data(self, smearing):
        p = NullProfile(lambda s, n: np.tanh(s) * (1 + n[..., 0] * np.tanh(s)), eps=3.0, degree=-1)
        with pytest.raises(InvalidInputError):
            smear_r(p, 20.0, smearing)

    def test_null_data_path_is_rest_frame_only(self, tanh_profile, smearing):
        with pytest.raises(InvalidInputError):
            smear_r(tanh_profile, 20.0, smearing, frame=Boost(0.3).frame())


class TestSmearG:
    def test_zero_smearing(self, tanh_profile):
        g = scaled_g(GKernel(), 20.0)
        assert smear_g(SphericalWave(tanh_profile), g, zero_smearing(), n_theta=4) == pytest.approx(0.0, abs=1e-15)

    def test_narrow_kernel_approaches_smear_r(self, tanh_profile, smearing):
        g = scaled_g(GKernel(), 40.0, eta=0.05)
        field = SphericalWave(tanh_profile)
        narrow = smear_g(field, g, smearing, nodes=24, n_theta=4)
        assert narrow == pytest.approx(smear_r(field, 40.0, smearing, n_theta=4), abs=1e-8)

    def test_converges_to_asymptote(self, tanh_profile, smearing):
        limit = asymptote_functional(tanh_profile, smearing)
        field = SphericalWave(tanh_profile)
        errors = [abs(smear_g(field, scaled_g(GKernel(), R), smearing, n_theta=4) - limit)
                  for R in (20.0, 40.0, 80.0)]
        assert errors[0] > errors[1] > errors[2]
        assert errors[2] < 1e-5


class TestAsymptoteFunctional:
    def test_zero_smearing(self, tanh_profile):
        assert asymptote_functional(tanh_profile, zero_smearing()) == pytest.approx(0.0, abs=1e-15)

    def test_tanh_pairing_oracle(self, tanh_profile, smearing):
        expected = 2 * np.pi * tanh_limit()
        assert pairing(outgoing(tanh_profile), smearing) == pytest.approx(expected, abs=1e-8)
        assert asymptote_functional(tanh_profile, smearing) == pytest.approx(tanh_limit(), abs=1e-8)

    def test_isotropic_smearing_averages_the_dipole(self, smearing):
        p = get_preset('gauss_bump').profile
        value, _ = integrate.quad(lambda s: np.exp(-0.5 * s * s) * f0(s), -np.inf, np.inf, epsabs=1e-14)
        assert asymptote_functional(p, smearing) == pytest.approx(2.0 * value, abs=1e-9)


class TestLorentzInvariance:
    def test_zero_rapidity(self, tanh_profile, smearing):
        result = lorentz_invariance_check(tanh_profile, smearing, Boost(0.0))
        assert result.diff <= 1e-15

    def test_tanh_half_rapidity(self, tanh_profile, smearing):
        result = lorentz_invariance_check(tanh_profile, smearing, Boost(0.5))
        assert result.diff <= 1e-4
        assert result.value_rest == pytest.approx(tanh_limit(), abs=1e-8)

    def test_anisotropic_data_unit_rapidity(self):
        p = get_preset('gauss_bump').profile
        f = smearing_profile(angular=dipole_angular(0.3, (1.0, 0.0, 0.0)))
        result = lorentz_invariance_check(p, f, Boost(1.0, (0.0, 1.0, 1.0)), n_theta=48)
        assert result.diff <= 1e-6

    def test_rejects_wrong_degree(self, tanh_profile):
        f = SeparableProfile(Lorentz2Shape(), degree=-1)
        with pytest.raises(InvalidInputError):
            lorentz_invariance_check(tanh_profile, f, Boost(0.5))


class TestDerivativeIdentity:
    def test_constant_field(self, smearing):
        assert deriv_identity_residual(ConstantField(1.0), 20.0, smearing, h=0.1, n_theta=4) <= 1e-10

    def test_tanh_spherical_wave(self, tanh_profile, smearing):
        assert deriv_identity_residual(SphericalWave(tanh_profile), 30.0, smearing, h=1e-2, n_theta=4) <= 1e-6

    def test_plane_wave_second_order(self, smearing):
        wave = PlaneWave([0.5, 0.0, 0.0, 0.5])
        steps = [0.04, 0.02, 0.01]
        residuals = [deriv_identity_residual(wave, 10.0, smearing, h=h, n_theta=16) for h in steps]
        assert scaling_exponent(steps, residuals) == pytest.approx(2.0, abs=0.2)

    def test_rejects_bad_step(self, smearing):
        with pytest.raises(InvalidInputError):
            deriv_identity_residual(ConstantField(1.0), 1.0, smearing, h=2.0)


class TestFrameDerivative:
    def test_zero_field(self, smearing):
        g = scaled_g(GKernel(), 10.0)
        assert frame_change_derivative(ConstantField(0.0), g, smearing, n_theta=4) == pytest.approx(0.0, abs=1e-15)
        assert frame_derivative_residual(ConstantField(0.0), g, smearing, n_theta=4) == pytest.approx(0.0, abs=1e-15)

    def test_constant_field_closed_form(self, smearing):
        # B_t[r, f] = πr/(t·e₀) for B ≡ 1, so ∂/∂t⁰ B[g_R, f] = -π∫ r g_R(r) dr = -πR
        g = scaled_g(GKernel(), 10.0)
        value = frame_change_derivative(ConstantField(1.0), g, smearing, direction=0, n_theta=8)
        assert value == pytest.approx(-10.0 * np.pi, rel=1e-5)
        assert frame_derivative_residual(ConstantField(1.0), g, smearing, 0, n_theta=8) <= 1e-4 * 10 * np.pi

    def test_tanh_spherical_wave(self, tanh_profile, smearing):
        g = scaled_g(GKernel(), 40.0)
        assert frame_derivative_residual(SphericalWave(tanh_profile), g, smearing, 0, n_theta=8) <= 1e-4

    def test_anisotropic_smearing(self, tanh_profile):
        f = smearing_profile(angular=dipole_angular(0.5, (1.0, 0.0, 0.0)))
        g = scaled_g(GKernel(), 40.0)
        assert frame_derivative_residual(SphericalWave(tanh_profile), g, f, 1, n_theta=8) <= 1e-4

    def test_second_order_constant_field(self, smearing):
        # ∂/∂t⁰ of -πR/t⁰ by central differences is -πR/(1 - h²)
        g = scaled_g(GKernel(), 10.0)
        fit = frame_derivative_order(ConstantField(1.0), g, smearing, n_theta=8)
        assert fit.exponent == pytest.approx(2.0, abs=0.2)
        assert fit.table[0]['derivative'].real == pytest.approx(-10.0 * np.pi / (1.0 - 0.04 ** 2), rel=1e-5)

    def test_second_order_tanh_spherical_wave(self, tanh_profile, smearing):
        g = scaled_g(GKernel(), 40.0)
        fit = frame_derivative_order(SphericalWave(tanh_profile), g, smearing, n_theta=8)
        assert fit.steps == [0.04, 0.02, 0.01]
        assert fit.exponent == pytest.approx(2.0, abs=0.2)
        assert fit.residuals[-1] < fit.residuals[0]

    def test_order_needs_three_steps(self, smearing):
        with pytest.raises(InvalidInputError):
            frame_derivative_order(ConstantField(1.0), scaled_g(GKernel(), 10.0), smearing, steps=(0.02, 0.01))

    def test_rejects_other_scalings(self, tanh_profile, smearing):
        with pytest.raises(InvalidInputError):
            frame_derivative_residual(SphericalWave(tanh_profile), scaled_g(GKernel(), 40.0, eta=0.5), smearing)

    def test_rejects_bad_direction(self, smearing):
        with pytest.raises(InvalidInputError):
            frame_change_derivative(ConstantField(1.0), scaled_g(GKernel(), 10.0), smearing, direction=4)


class TestDerivativeDecay:
    def test_decays_like_inverse_width(self, tanh_profile, smearing):
        fit = outgoing_derivative_decay(SphericalWave(tanh_profile), SmearKernel(smearing), [10.0, 20.0, 40.0, 80.0],
                                        n_theta=4)
        assert fit.exponent == pytest.approx(-1.0, abs=0.05)
        assert len(fit.table) == 4

    def test_kernel_rejects_slow_smearing(self):
        with pytest.raises(InvalidInputError):
            SmearKernel(SeparableProfile(Lorentz2Shape(), eps=2.0, degree=-2))


class TestMomentumSide:
    @staticmethod
    def gauss_limit():
        value, _ = integrate.quad(lambda w: (1 + w) * np.exp(-w - 0.5 * w * w), 0.0, np.inf, epsabs=1e-14)
        return np.pi / np.sqrt(2 * np.pi) * value

    def test_zero_spectrum(self, smearing):
        c = MomentumProfile(SeparableProfile(GaussShape(), amplitude=0.0))
        g = scaled_g(GKernel(), 20.0)
        assert momentum_limit(c, smearing) == pytest.approx(0.0, abs=1e-15)
        assert momentum_side_smear(c, g, smearing) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize('sign', [1, -1])
    def test_sheet_limit(self, sign, smearing):
        c = MomentumProfile(get_preset('gauss_bump').profile)
        assert momentum_limit(c, smearing, sign, n_theta=8) == pytest.approx(self.gauss_limit(), abs=1e-8)

    def test_both_signs_give_the_asymptote(self, smearing):
        p = get_preset('gauss_bump').profile
        c = MomentumProfile(p)
        total = momentum_limit(c, smearing, 1, n_theta=8) + momentum_limit(c, smearing, -1, n_theta=8)
        assert total == pytest.approx(asymptote_functional(p, smearing), abs=1e-7)

    def test_split_profile_asymptote(self, smearing):
        p = get_preset('gauss_bump').profile
        positive = frequency_split(p, 1, s_max=256.0, points=2 ** 16)
        expected = momentum_limit(MomentumProfile(p), smearing, 1, n_theta=8)
        assert asymptote_functional(positive, smearing, n_theta=8) == pytest.approx(expected, abs=1e-5)

    def test_wrong_term_decays(self, smearing):
        c = MomentumProfile(get_preset('gauss_bump').profile)
        g = GKernel()
        radii = [20.0, 40.0, 80.0, 160.0]
        values = [abs(wrong_term(c, scaled_g(g, R), smearing, n_theta=8)) for R in radii]
        assert scaling_exponent(radii, values) == pytest.approx(-1.0, abs=0.1)

    def test_prediction_splits_into_sheet_and_wrong_term(self, smearing):
        c = MomentumProfile(get_preset('gauss_bump').profile)
        g = scaled_g(GKernel(), 40.0)
        total = momentum_side_smear(c, g, smearing, n_theta=8)
        parts = momentum_limit(c, smearing, 1, n_theta=8) + wrong_term(c, g, smearing, n_theta=8)
        assert total == pytest.approx(parts, abs=1e-14)

    def test_rejects_infrared_singular_spectrum(self, tanh_profile, smearing):
        with pytest.raises(InvalidInputError):
            momentum_limit(MomentumProfile(tanh_profile), smearing)

    def test_rejects_bad_sign(self, smearing):
        c = MomentumProfile(get_preset('gauss_bump').profile)
        with pytest.raises(InvalidInputError):
            momentum_limit(c, smearing, sign=0)

    @pytest.mark.slow
    def test_position_side_remainder_decays(self, smearing):
        p = get_preset('gauss_bump').profile
        positive = frequency_split(p, 1, s_max=2048.0, points=2 ** 18)
        c = MomentumProfile(p)
        gaps = []
        for R in (20.0, 80.0):
            g = scaled_g(GKernel(), R)
            position = smear_g(positive, g, smearing, nodes=32, n_theta=8, n_phi=32)
            gaps.append(abs(position - momentum_side_smear(c, g, smearing, n_theta=8)))
        assert gaps[1] < gaps[0]


def test_tanh_shape_is_isotropic_under_smearing(tanh_profile):
    p = SeparableProfile(TanhShape(), dipole_angular(0.0))
    f = smearing_profile()
    assert smear_r(p, 25.0, f, n_theta=8) == pytest.approx(smear_r(tanh_profile, 25.0, f, n_theta=8), abs=1e-12)
