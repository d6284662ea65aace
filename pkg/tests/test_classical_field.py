import numpy as np
import pytest

from nullasym.exceptions import InvalidInputError
from nullasym.models.geometry import NullDirection
from nullasym.models.profiles import (
    NullProfile,
    SeparableProfile,
    TanhShape,
    dipole_angular,
    get_preset,
    wave_packet,
)
from nullasym.physics.classical_field import (
    MomentumProfile,
    NullDataField,
    PlaneWave,
    SphericalWave,
    evaluate_field,
    evaluate_field_momentum,
    field_from_profile,
    null_asymptote,
    reconstruct_outgoing,
    spacelike_tail,
    tail_reference,
    wave_residual,
)
from nullasym.utils.extrapolation import scaling_exponent

R_LIST = [20.0, 40.0, 80.0, 160.0]


def zero_profile():
    return NullProfile(lambda s, n: np.zeros(np.broadcast_shapes(np.shape(s), np.shape(n)[:-1])), eps=3.0)


class TestEvaluateField:
    def test_zero_data(self):
        assert evaluate_field(zero_profile(), [0.3, 1.0, 0.0, 0.0]) == pytest.approx(0.0, abs=1e-15)

    def test_spherical_wave(self, tanh_profile):
        value = evaluate_field(tanh_profile, [0.0, 0.0, 0.0, 2.0])
        assert value == pytest.approx(-np.tanh(2.0), abs=1e-8)
        assert value == pytest.approx(-0.96403, abs=1e-5)

    def test_origin_limit(self, tanh_profile):
        value = evaluate_field(tanh_profile, [0.3, 0.0, 0.0, 0.0])
        assert value == pytest.approx(-2.0 / np.cosh(0.3) ** 2, abs=1e-10)

    def test_closed_form_agrees_with_quadrature(self, tanh_profile):
        x = np.array([[0.4, 0.3, -1.2, 0.5], [1.0, 0.0, 0.0, 2e-6], [-0.5, 0.0, 0.0, 0.0]])
        closed = SphericalWave(tanh_profile)
        quad = NullDataField(tanh_profile)
        assert closed(x) == pytest.approx(quad(x), abs=1e-9)
        assert closed.gradient(x) == pytest.approx(quad.gradient(x), abs=1e-8)

    def test_field_from_profile_picks_closed_form(self, tanh_profile):
        assert isinstance(field_from_profile(tanh_profile), SphericalWave)
        assert isinstance(field_from_profile(get_preset('gauss_bump').profile), NullDataField)

    def test_plane_wave_gradient(self):
        k = np.array([2.0, 0.0, 0.0, 2.0])
        wave = PlaneWave(k)
        x = np.array([0.3, 0.1, -0.2, 0.7])
        h = 1e-6
        fd = np.array([(wave(x + h * e) - wave(x - h * e)) / (2 * h) for e in np.eye(4)])
        assert wave.gradient(x) == pytest.approx(fd, abs=1e-8)


class TestMomentumRepresentation:
    def test_zero_data(self):
        c = MomentumProfile(SeparableProfile(TanhShape(), amplitude=0.0))
        assert evaluate_field_momentum(c, [0.0, 0.0, 0.0, 2.0]) == pytest.approx(0.0, abs=1e-15)

    def test_matches_position_space(self, tanh_profile):
        c = MomentumProfile(tanh_profile)
        x = [0.0, 0.0, 0.0, 2.0]
        assert evaluate_field_momentum(c, x) == pytest.approx(evaluate_field(tanh_profile, x), abs=1e-5)

    @pytest.mark.parametrize('name', ['tanh', 'gauss_bump', 'arctan_angular'])
    def test_matches_at_random_points(self, name, rng):
        p = get_preset(name).profile
        c = MomentumProfile(p)
        x = np.concatenate([rng.uniform(-1, 1, size=(5, 1)), rng.uniform(-1.5, 1.5, size=(5, 3))], axis=1)
        direct = NullDataField(p)(x)
        assert evaluate_field_momentum(c, x) == pytest.approx(direct, abs=1e-5)

    def test_spectral_peak(self):
        omega0 = 1.0
        packet = wave_packet(omega0, 8.0)
        t = np.linspace(-64.0, 64.0, 256, endpoint=False)
        x = np.zeros((t.size, 4))
        x[:, 0] = t
        values = evaluate_field_momentum(MomentumProfile(packet), x, n_theta=4)
        assert values == pytest.approx(-2.0 * packet.derivative(1)(t, np.array([0.0, 0.0, 1.0])), abs=1e-6)
        spectrum = np.abs(np.fft.rfft(values))
        freqs = 2 * np.pi * np.fft.rfftfreq(t.size, t[1] - t[0])
        assert abs(freqs[np.argmax(spectrum)] - omega0) <= freqs[1]

    @pytest.mark.parametrize('name,expected', [('tanh', 2.0), ('gauss_bump', 0.0)])
    def test_delta_b_from_spectrum(self, name, expected):
        c = MomentumProfile(get_preset(name).profile)
        assert c.delta_b(np.array([0.0, 0.0, 1.0])) == pytest.approx(expected, abs=1e-8)

    def test_delta_b_with_angular_factor(self):
        c = MomentumProfile(get_preset('arctan_angular').profile)
        n = np.array([0.6, 0.0, -0.8])
        assert c.delta_b(n) == pytest.approx(np.pi * (1 - 0.4), abs=1e-8)

    @pytest.mark.parametrize('gamma', [0.5, 3.0])
    def test_scaling_consistency(self, gamma):
        c = MomentumProfile(get_preset('gauss_bump').profile)
        l = np.array([1.0, 0.0, 0.6, 0.8])
        omega = np.array([0.4, 1.1])
        assert c.value(omega / gamma, gamma * l) == pytest.approx(c.value(omega, l), rel=1e-8)

    def test_value_rejects_zero_frequency(self):
        c = MomentumProfile(get_preset('tanh').profile)
        with pytest.raises(InvalidInputError):
            c.value(0.0, np.array([1.0, 0.0, 0.0, 1.0]))


class TestNullAsymptote:
    def test_zero_data(self):
        result = null_asymptote(zero_profile(), [0, 0, 0, 0], [0.0, 0.0, 1.0], R_LIST)
        assert result.limit == pytest.approx(0.0, abs=1e-14)

    @pytest.mark.parametrize('n_hat', [[0.0, 0.0, 1.0], [0.6, 0.0, -0.8]])
    def test_future_tanh(self, tanh_profile, n_hat):
        result = null_asymptote(tanh_profile, [0, 0, 0, 0], NullDirection(n_hat), R_LIST)
        assert result.limit == pytest.approx(-1.0, abs=1e-9)
        assert result.expected == pytest.approx(-1.0)

    def test_past_tanh(self, tanh_profile):
        result = null_asymptote(tanh_profile, [0, 0, 0, 0], [0.0, 1.0, 0.0], R_LIST, sign=-1)
        assert result.limit == pytest.approx(1.0, abs=1e-9)
        assert result.expected == pytest.approx(1.0)

    def test_angular_profile_off_origin(self):
        p = get_preset('gauss_bump').profile
        result = null_asymptote(p, [0.5, 0.2, -0.1, 0.3], [0.0, 0.6, 0.8], R_LIST)
        assert result.error < 1e-6

    def test_rejects_short_radii(self, tanh_profile):
        with pytest.raises(InvalidInputError):
            null_asymptote(tanh_profile, [0, 0, 0, 0], [0.0, 0.0, 1.0], [5.0, 20.0, 40.0])

    def test_rejects_unsorted_radii(self, tanh_profile):
        with pytest.raises(InvalidInputError):
            null_asymptote(tanh_profile, [0, 0, 0, 0], [0.0, 0.0, 1.0], [40.0, 20.0, 80.0])

    def test_reconstruction(self):
        p = get_preset('gauss_bump').profile
        directions = np.array([[0.0, 0.0, 1.0], [0.0, 0.6, -0.8]])
        report = reconstruct_outgoing(p, [-1.0, 0.0, 1.5], directions, R_LIST, threads=1)
        assert report.max_deviation < 1e-7
        assert len(report.table) == 6


class TestSpacelikeTail:
    def test_infrared_regular_has_no_tail(self):
        result = spacelike_tail(get_preset('gauss_bump').profile, [0, 0, 0, 0], [0.0, 0.0, 1.0, 0.0], R_LIST)
        assert result.limit == pytest.approx(0.0, abs=1e-8)
        assert result.expected == pytest.approx(0.0, abs=1e-12)

    def test_tanh_tail(self, tanh_profile):
        result = spacelike_tail(tanh_profile, [0, 0, 0, 0], [0.0, 0.0, 1.0, 0.0], R_LIST)
        assert result.limit == pytest.approx(-2.0, abs=1e-8)
        assert result.expected == pytest.approx(-2.0, abs=1e-12)

    def test_boosted_direction_with_angular_factor(self):
        p = SeparableProfile(TanhShape(), dipole_angular(0.5), eps=3.0)
        y = [0.5, 0.0, 0.0, 1.0]
        assert tail_reference(p, y) == pytest.approx(-2.5, abs=1e-12)
        result = spacelike_tail(p, [0, 0, 0, 0], y, R_LIST)
        assert result.limit == pytest.approx(-2.5, abs=1e-7)

    def test_evenness(self):
        p = SeparableProfile(TanhShape(), dipole_angular(0.5), eps=3.0)
        y = np.array([0.2, 0.6, 0.0, 0.8])
        plus = spacelike_tail(p, [0, 0, 0, 0], y, R_LIST)
        minus = spacelike_tail(p, [0, 0, 0, 0], -y, R_LIST)
        assert plus.limit == pytest.approx(minus.limit, abs=1e-6)

    def test_rejects_timelike(self, tanh_profile):
        with pytest.raises(InvalidInputError):
            spacelike_tail(tanh_profile, [0, 0, 0, 0], [2.0, 0.0, 0.0, 1.0], R_LIST)


class TestWaveResidual:
    def test_zero_data(self):
        assert wave_residual(zero_profile(), [0.0, 0.1, 0.2, 0.3], 0.01) == pytest.approx(0.0, abs=1e-14)

    def test_second_order(self, tanh_profile):
        steps = [0.04, 0.02, 0.01]
        residuals = [abs(wave_residual(tanh_profile, [1.0, 0.0, 0.0, 2.0], h)) for h in steps]
        assert scaling_exponent(steps, residuals) == pytest.approx(2.0, abs=0.2)

    def test_gaussian_angular_profile(self, rng):
        p = get_preset('gauss_bump').profile
        x = rng.uniform(-1, 1, size=4)
        assert abs(wave_residual(p, x, 0.01)) <= 1e-3

    def test_step_range(self, tanh_profile):
        with pytest.raises(InvalidInputError):
            wave_residual(tanh_profile, [0, 0, 0, 0], 0.5)
