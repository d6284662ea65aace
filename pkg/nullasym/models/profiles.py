"""Null-data profiles b(s, l) on ℝ × lightcone and the radial kernels g.

A profile is evaluated in the t-gauge of the rest frame, ``p(s, n)`` with
``n`` an array of unit vectors in its last axis; values away from the gauge
come from the homogeneous extension. Fourier transforms use
f̃(ω) = (1/2π)∫ e^{iωs} f(s) ds, so ∂_s becomes multiplication by -iω.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import logging
from math import factorial
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.hermite_e import hermeval
from scipy import fft as sfft
from scipy import integrate
from scipy.interpolate import CubicSpline

from nullasym.exceptions import InvalidInputError
from nullasym.models.geometry import (
    E0,
    LORENTZ_GENERATORS,
    SphereGrid,
    frame_direction,
    lightcone_vector,
    lorentz_generator_action,
    minkowski_dot,
)
from nullasym.utils.quadrature import gauss_legendre, real_line_rule

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]
Spectrum = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _broadcast(s, n):
    s = np.asarray(s, dtype=float)
    n = np.asarray(n, dtype=float)
    return s, n


def constant_angular(value: float = 1.0):
    def angular(n):
        n = np.asarray(n, dtype=float)
        return np.full(n.shape[:-1], value)
    angular.label = f"const({value})"
    return angular


def dipole_angular(weight: float = 0.5, axis: Sequence[float] = (0.0, 0.0, 1.0)):
    """1 + weight·(n̂·axis)"""
    axis = np.asarray(axis, dtype=float)

    def angular(n):
        return 1.0 + weight * (np.asarray(n, dtype=float) @ axis)
    angular.label = f"1+{weight}*n.{axis.tolist()}"
    return angular


def cap_angular(axis: Sequence[float], radius: float = np.pi / 3):
    """Smooth bump exp(1 - 1/x) supported in the cap of angular radius ``radius`` about ``axis``."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    denom = 1.0 - np.cos(radius)

    def angular(n):
        x = 1.0 - (1.0 - np.asarray(n, dtype=float) @ axis) / denom
        inside = x > 0
        safe = np.where(inside, x, 1.0)
        return np.where(inside, np.exp(1.0 - 1.0 / safe), 0.0)
    angular.label = f"cap({axis.tolist()}, {radius})"
    angular.axis = axis
    angular.radius = radius
    return angular


# --- one-dimensional shapes σ(x), x = s/λ -------------------------------------------


class Shape:
    """A unit-scale profile shape with derivatives and transforms."""

    name = 'shape'
    limits = (0.0, 0.0)

    def derivative(self, m: int, x):
        raise NotImplementedError

    def transform(self, nu):
        """σ̃(ν), or None when σ has no ordinary transform."""
        return None

    def dot_transform(self, nu):
        """Transform of σ'."""
        sigma = self.transform(nu)
        if sigma is None:
            return None
        return -1j * np.asarray(nu) * sigma


class TanhShape(Shape):
    name = 'tanh'
    limits = (-1.0, 1.0)

    def __init__(self):
        polys = [Polynomial([0.0, 1.0])]
        one_minus_t2 = Polynomial([1.0, 0.0, -1.0])
        for _ in range(12):
            polys.append(polys[-1].deriv() * one_minus_t2)
        self._polys = polys

    def derivative(self, m, x):
        t = np.tanh(np.asarray(x, dtype=float))
        if m >= len(self._polys):
            raise InvalidInputError(f"tanh derivatives available up to order {len(self._polys) - 1}")
        return self._polys[m](t)

    def dot_transform(self, nu):
        nu = np.asarray(nu, dtype=float)
        half = 0.5 * np.pi * nu
        small = np.abs(half) < 1e-8
        safe = np.where(small, 1.0, half)
        value = np.where(small, 1.0 / np.pi, (nu / 2.0) / np.sinh(np.where(small, 1.0, safe)))
        # sinh overflows beyond |ν| ~ 450; the spectrum is zero there
        return np.where(np.abs(half) > 700.0, 0.0, value).astype(complex)


class GaussShape(Shape):
    name = 'gauss'
    limits = (0.0, 0.0)

    def derivative(self, m, x):
        x = np.asarray(x, dtype=float)
        coeffs = np.zeros(m + 1)
        coeffs[m] = 1.0
        return (-1.0) ** m * hermeval(x, coeffs) * np.exp(-0.5 * x ** 2)

    def transform(self, nu):
        nu = np.asarray(nu, dtype=float)
        return (np.exp(-0.5 * nu ** 2) / np.sqrt(2.0 * np.pi)).astype(complex)


class ArctanShape(Shape):
    name = 'arctan'
    limits = (-0.5 * np.pi, 0.5 * np.pi)

    def derivative(self, m, x):
        x = np.asarray(x, dtype=float)
        if m == 0:
            return np.arctan(x)
        return np.imag((-1.0) ** (m - 1) * factorial(m - 1) / (x - 1j) ** m)

    def dot_transform(self, nu):
        return (0.5 * np.exp(-np.abs(np.asarray(nu, dtype=float)))).astype(complex)


class Lorentz2Shape(Shape):
    """σ(x) = (1 + x²)^-2"""

    name = 'lorentz2'
    limits = (0.0, 0.0)

    def derivative(self, m, x):
        x = np.asarray(x, dtype=float)
        z = x - 1j
        term = (-0.25j) * (-1.0) ** m * factorial(m) / z ** (m + 1) \
            + (-0.25) * (-1.0) ** m * factorial(m + 1) / z ** (m + 2)
        return 2.0 * np.real(term)

    def transform(self, nu):
        a = np.abs(np.asarray(nu, dtype=float))
        return ((1.0 + a) * np.exp(-a) / 4.0).astype(complex)


class PacketShape(Shape):
    """σ(x) = exp(-x²/2)·cos(kx), a wave packet around frequency k."""

    name = 'packet'
    limits = (0.0, 0.0)

    def __init__(self, k: float):
        self.k = float(k)

    def derivative(self, m, x):
        y = np.asarray(x, dtype=float) - 1j * self.k
        coeffs = np.zeros(m + 1)
        coeffs[m] = 1.0
        x = np.asarray(x, dtype=float)
        value = (-1.0) ** m * hermeval(y, coeffs) * np.exp(-0.5 * x ** 2 + 1j * self.k * x)
        return np.real(value)

    def transform(self, nu):
        nu = np.asarray(nu, dtype=float)
        return ((np.exp(-0.5 * (nu - self.k) ** 2) + np.exp(-0.5 * (nu + self.k) ** 2))
                / (2.0 * np.sqrt(2.0 * np.pi))).astype(complex)


SHAPES = {
    'tanh': TanhShape,
    'gauss': GaussShape,
    'arctan': ArctanShape,
    'lorentz2': Lorentz2Shape,
}


# --- profiles --------------------------------------------------------------------


class NullProfile:
    """A function on ℝ × C⁺ in the t-gauge with declared decay class and degree.

    ``derivatives[m]`` (when given) evaluates ∂_s^m exactly; higher orders fall
    back to finite differences. ``decay_constants`` maps (angular order k,
    s-order m) to the declared bound constant.
    """

    def __init__(self, evaluator: Evaluator, eps: float, lam: float = 1.0, degree: int = 0,
                 name: str = 'profile', derivatives: Sequence[Evaluator] = None,
                 spectrum: Spectrum = None, dot_spectrum: Spectrum = None,
                 decay_constants: Dict[Tuple[int, int], float] = None,
                 limit_values: Callable = None):
        if lam <= 0:
            raise InvalidInputError(f"length scale λ must be positive, got {lam}")
        self.evaluator = evaluator
        self.eps = float(eps)
        self.lam = float(lam)
        self.degree = int(degree)
        self.name = name
        self.derivatives = list(derivatives) if derivatives else [evaluator]
        self.spectrum = spectrum
        self.dot_spectrum = dot_spectrum
        self.decay_constants = dict(decay_constants or {})
        self.limit_values = limit_values

    @property
    def deriv_order_available(self) -> int:
        return len(self.derivatives) - 1

    def __call__(self, s, n):
        s, n = _broadcast(s, n)
        return self.evaluator(s, n)

    def derivative(self, m: int) -> Evaluator:
        if m < len(self.derivatives):
            return self.derivatives[m]
        return _finite_difference(self.derivatives[-1], m - self.deriv_order_available, 1e-2 * self.lam)

    def transform(self, omega, n):
        """f̃(ω, n̂); closed form when known, quadrature otherwise."""
        omega = np.asarray(omega, dtype=float)
        if self.spectrum is not None:
            return self.spectrum(omega, np.asarray(n, dtype=float))
        return _transform_by_quadrature(self.evaluator, omega, np.asarray(n, dtype=float), self.lam)

    def transform_derivative(self, omega, n):
        """Transform of ∂_s f."""
        omega = np.asarray(omega, dtype=float)
        if self.dot_spectrum is not None:
            return self.dot_spectrum(omega, np.asarray(n, dtype=float))
        return -1j * omega * self.transform(omega, n)

    def __repr__(self) -> str:
        return f"NullProfile({self.name!r}, eps={self.eps}, lam={self.lam}, degree={self.degree})"


class SeparableProfile(NullProfile):
    """b(s, n̂) = A·σ(s/λ)·a(n̂)."""

    def __init__(self, shape: Shape, angular=None, amplitude: float = 1.0, lam: float = 1.0,
                 eps: float = 3.0, degree: int = -1, name: str = None, order: int = 8,
                 decay_constants=None):
        self.shape = shape
        self.angular = angular if angular is not None else constant_angular(1.0)
        self.amplitude = float(amplitude)
        derivatives = [self._derivative_evaluator(m, lam) for m in range(order + 1)]
        spectrum = None
        if shape.transform(np.zeros(1)) is not None:
            spectrum = self._spectrum
        super().__init__(derivatives[0], eps, lam, degree, name or shape.name, derivatives,
                         spectrum, self._dot_spectrum, decay_constants, self._limits)

    def _derivative_evaluator(self, m, lam):
        def evaluate(s, n):
            s, n = _broadcast(s, n)
            return self.amplitude * lam ** (-m) * self.shape.derivative(m, s / lam) * self.angular(n)
        return evaluate

    def _spectrum(self, omega, n):
        return self.amplitude * self.lam * self.shape.transform(self.lam * omega) * self.angular(n)

    def _dot_spectrum(self, omega, n):
        return self.amplitude * self.shape.dot_transform(self.lam * omega) * self.angular(n)

    def _limits(self, n):
        a = self.amplitude * self.angular(np.asarray(n, dtype=float))
        lo, hi = self.shape.limits
        return lo * a, hi * a

    def is_isotropic(self) -> bool:
        return getattr(self.angular, 'label', '').startswith('const')

    def radial(self, m: int = 0):
        """s-part A·λ^-m·σ^(m)(s/λ) of the m-th derivative."""
        def evaluate(s):
            s = np.asarray(s, dtype=float)
            return self.amplitude * self.lam ** (-m) * self.shape.derivative(m, s / self.lam)
        return evaluate


def _finite_difference(func: Evaluator, order: int, h: float) -> Evaluator:
    if order == 0:
        return func
    inner = _finite_difference(func, order - 1, h)

    def derivative(s, n):
        s, n = _broadcast(s, n)
        return (-inner(s + 2 * h, n) + 8 * inner(s + h, n) - 8 * inner(s - h, n) + inner(s - 2 * h, n)) / (12 * h)
    return derivative


def _transform_by_quadrature(func: Evaluator, omega, n, lam):
    x, w = real_line_rule(lam, core=64.0, n_core=16, panels_per_scale=2)
    omega = np.asarray(omega, dtype=float)
    n = np.asarray(n, dtype=float)
    shape = np.broadcast_shapes(omega.shape, n.shape[:-1])
    flat_omega = np.broadcast_to(omega, shape).reshape(-1)
    flat_n = np.broadcast_to(n, shape + (3,)).reshape(-1, 3)
    values = np.asarray(func(x[:, None], flat_n[None, :, :]))
    phase = np.exp(1j * x[:, None] * flat_omega[None, :])
    result = np.sum(w[:, None] * phase * values, axis=0) / (2 * np.pi)
    return result.reshape(shape)


def s_derivative(p: NullProfile, m: int) -> NullProfile:
    """Profile of ∂_s^m p: degree drops by m, decay constants shift in s-order."""
    if m < 0:
        raise InvalidInputError('derivative order must be non-negative')
    if m == 0:
        return p
    if m <= p.deriv_order_available:
        derivatives = p.derivatives[m:]
    else:
        derivatives = [p.derivative(m)]

    def spectrum(omega, n, _p=p, _m=m):
        return (-1j * omega) ** (_m - 1) * _p.transform_derivative(omega, n)

    def dot_spectrum(omega, n, _p=p, _m=m):
        return (-1j * omega) ** _m * _p.transform_derivative(omega, n)

    constants = {(k, j - m): c for (k, j), c in p.decay_constants.items() if j >= m}
    return NullProfile(derivatives[0], p.eps, p.lam, p.degree - m, f"{p.name}^({m})",
                       derivatives, spectrum, dot_spectrum, constants)


def extend_homogeneous(p: NullProfile, s, l, frame=None):
    """(t·l)^n · p(s/(t·l), l/(t·l)) for null l (array of four-vectors allowed)."""
    l = np.asarray(l, dtype=float)
    t = E0 if frame is None else np.asarray(frame, dtype=float)
    tl = np.asarray(minkowski_dot(t, l))
    square = minkowski_dot(l, l)
    if np.any(np.abs(square) > 1e-10 * np.maximum(tl ** 2, 1.0)):
        raise InvalidInputError('l is not a null vector')
    if np.any(tl <= 0):
        raise InvalidInputError('l is not future pointing')
    n = frame_direction(l / tl[..., None], frame)
    s = np.asarray(s, dtype=float)
    return tl ** p.degree * p(s / tl, n)


def homogeneous_transform(p: NullProfile, omega, l):
    """f̃(ω, l) off the gauge: (t·l)^(n+1)·f̃((t·l)ω, l/(t·l))."""
    l = np.asarray(l, dtype=float)
    tl = np.asarray(minkowski_dot(E0, l))
    n = frame_direction(l / tl[..., None] if l.ndim > 1 else l / tl)
    return tl ** (p.degree + 1) * p.transform(tl * np.asarray(omega, dtype=float), n)


def _as_rows(n_hat) -> np.ndarray:
    n = np.asarray(n_hat, dtype=float)
    return n.reshape(-1, 3)


def delta_b(p: NullProfile, n_hat) -> np.ndarray:
    """Δb(n̂) = b(+∞) - b(-∞) = ∫ ḃ ds, integrated adaptively on both half-lines."""
    if p.eps <= 0:
        raise InvalidInputError(f"ḃ is not integrable for declared ε = {p.eps}")
    rows = _as_rows(n_hat)
    bdot = p.derivative(1)
    out = np.empty(len(rows), dtype=complex)
    for i, n in enumerate(rows):
        total = 0.0 + 0.0j
        for part in (np.real, np.imag):
            def integrand(s, _n=n, _part=part):
                return float(_part(bdot(np.array(s), _n)))
            left, _ = integrate.quad(integrand, -np.inf, 0.0, limit=200, epsabs=1e-13, epsrel=1e-12)
            right, _ = integrate.quad(integrand, 0.0, np.inf, limit=200, epsabs=1e-13, epsrel=1e-12)
            total += (left + right) * (1.0 if part is np.real else 1.0j)
        out[i] = total
    result = out.reshape(np.asarray(n_hat).shape[:-1])
    return result.real if np.all(result.imag == 0) else result


def limits(p: NullProfile, n_hat) -> Tuple[np.ndarray, np.ndarray]:
    """(b(-∞, n̂), b(+∞, n̂))."""
    if p.limit_values is not None:
        return p.limit_values(np.asarray(n_hat, dtype=float))
    rows = _as_rows(n_hat)
    bdot = p.derivative(1)
    lo = np.empty(len(rows))
    hi = np.empty(len(rows))
    for i, n in enumerate(rows):
        def integrand(s, _n=n):
            return float(np.real(bdot(np.array(s), _n)))
        b0 = float(np.real(p(np.array(0.0), n)))
        left, _ = integrate.quad(integrand, -np.inf, 0.0, limit=200)
        right, _ = integrate.quad(integrand, 0.0, np.inf, limit=200)
        lo[i] = b0 - left
        hi[i] = b0 + right
    shape = np.asarray(n_hat).shape[:-1]
    return lo.reshape(shape), hi.reshape(shape)


def _shifted(p: NullProfile, which: int, suffix: str) -> NullProfile:
    def shift(n):
        return limits(p, n)[which]

    derivatives = list(p.derivatives)

    def evaluate(s, n):
        s, n = _broadcast(s, n)
        return p(s, n) - shift(n)
    derivatives[0] = evaluate

    def shifted_limits(n):
        lo, hi = limits(p, n)
        c = (lo, hi)[which]
        return lo - c, hi - c

    return NullProfile(evaluate, p.eps, p.lam, p.degree, f"{p.name}_{suffix}", derivatives,
                       None, p.dot_spectrum, p.decay_constants, shifted_limits)


def outgoing(p: NullProfile) -> NullProfile:
    """b_out = b - b(+∞)."""
    return _shifted(p, 1, 'out')


def incoming(p: NullProfile) -> NullProfile:
    """b_in = b - b(-∞)."""
    return _shifted(p, 0, 'in')


# --- frequency splitting ---------------------------------------------------------------


@dataclass
class SplitSamples:
    s: np.ndarray
    values: np.ndarray
    tail_mass: float
    truncation: float


def split_multiplier(omega, sign: int, k: float) -> np.ndarray:
    """e^{∓ikπ/2} θ(±ω) |ω|^k with θ(0) = 1/2 and |0|^k = 0 for k > 0."""
    omega = np.asarray(omega, dtype=float)
    step = np.where(sign * omega > 0, 1.0, 0.0)
    step = np.where(omega == 0, 0.5, step)
    power = np.abs(omega) ** k if k > 0 else np.ones_like(omega)
    return np.exp(-1j * sign * k * np.pi / 2) * step * power


def frequency_split_samples(p: NullProfile, sign: int, k: float, n_hat,
                            s_max: float = None, points: int = 2 ** 14,
                            tail_threshold: float = 1e-8) -> SplitSamples:
    """Samples of the split profile on the uniform grid used by the transform."""
    if sign not in (1, -1):
        raise InvalidInputError('sign must be +1 or -1')
    if k < 0:
        raise InvalidInputError('k must be non-negative')
    if s_max is None:
        s_max = 64.0 * p.lam
    spacing = 2.0 * s_max / points
    s = -s_max + spacing * np.arange(points)
    n = np.asarray(n_hat, dtype=float)
    samples = np.asarray(p(s, np.broadcast_to(n, s.shape + (3,))), dtype=complex)

    spectrum = sfft.fft(samples)
    # numpy's kernel is e^{-iνs}, our transform uses e^{+iωs}: ω = -ν
    nu = 2.0 * np.pi * sfft.fftfreq(points, spacing)
    omega = -nu
    multiplier = split_multiplier(omega, sign, k)
    nyquist = points // 2
    multiplier[nyquist] = 0.5 * np.exp(-1j * sign * k * np.pi / 2) * abs(omega[nyquist]) ** k
    values = sfft.ifft(spectrum * multiplier)

    magnitude = np.abs(spectrum)
    total = float(np.sum(magnitude))
    high = np.abs(nu) > 0.75 * np.pi / spacing
    tail_mass = float(np.sum(magnitude[high]) / total) if total > 0 else 0.0
    peak = float(np.max(np.abs(samples))) if samples.size else 0.0
    truncation = float(max(abs(samples[0]), abs(samples[-1])) / peak) if peak > 0 else 0.0
    if tail_mass > tail_threshold:
        logger.warning('frequency split of %s: spectral tail mass %.3e above %.1e, grid too coarse',
                       p.name, tail_mass, tail_threshold)
    return SplitSamples(s=s, values=values, tail_mass=tail_mass, truncation=truncation)


class SplitProfile(NullProfile):
    """Positive/negative frequency part of a profile, interpolated from its split samples."""

    def __init__(self, source: NullProfile, sign: int, k: float = 0.0,
                 s_max: float = None, points: int = 2 ** 14):
        self.source = source
        self.sign = sign
        self.k = float(k)
        self.s_max = s_max if s_max is not None else 64.0 * source.lam
        self.points = points
        self._splines: Dict[bytes, Tuple[CubicSpline, CubicSpline]] = {}
        self.tail_mass = 0.0
        self.separable = isinstance(source, SeparableProfile)
        if self.separable:
            # split the s-shape once, reattach the angular factor on evaluation
            self._split_source = SeparableProfile(source.shape, None, source.amplitude, source.lam,
                                                  source.eps, source.degree)
        else:
            self._split_source = source
        name = f"{source.name}[{'+' if sign > 0 else '-'},{k:g}]"
        super().__init__(self._evaluate, source.eps, source.lam, source.degree, name,
                         [self._evaluate, self._evaluate_dot], self._spectrum)

    def _spline_for(self, n: np.ndarray):
        key = np.round(n, 14).tobytes()
        cached = self._splines.get(key)
        if cached is None:
            samples = frequency_split_samples(self._split_source, self.sign, self.k, n, self.s_max, self.points)
            self.tail_mass = max(self.tail_mass, samples.tail_mass)
            cached = (CubicSpline(samples.s, samples.values.real), CubicSpline(samples.s, samples.values.imag))
            self._splines[key] = cached
        return cached

    def _values(self, s, n, nu: int):
        s, n = _broadcast(s, n)
        shape = np.broadcast_shapes(s.shape, n.shape[:-1])
        s_b = np.broadcast_to(s, shape)
        n_b = np.broadcast_to(n, shape + (3,))
        out = np.zeros(shape, dtype=complex)
        inside = np.abs(s_b) <= self.s_max
        if self.separable:
            re, im = self._spline_for(np.array([0.0, 0.0, 1.0]))
            angular = self.source.angular(n_b)
            out[inside] = (re(s_b[inside], nu) + 1j * im(s_b[inside], nu)) * angular[inside]
            return out
        flat_n = n_b.reshape(-1, 3)
        flat_s = s_b.reshape(-1)
        flat_out = out.reshape(-1)
        unique, inverse = np.unique(np.round(flat_n, 14), axis=0, return_inverse=True)
        for j, direction in enumerate(unique):
            mask = (inverse.reshape(-1) == j) & (np.abs(flat_s) <= self.s_max)
            if np.any(mask):
                re, im = self._spline_for(direction)
                flat_out[mask] = re(flat_s[mask], nu) + 1j * im(flat_s[mask], nu)
        return flat_out.reshape(shape)

    def _evaluate(self, s, n):
        return self._values(s, n, 0)

    def _evaluate_dot(self, s, n):
        return self._values(s, n, 1)

    def radial(self, m: int = 0):
        """Split s-part of a separable source; the angular factor is ``source.angular``."""
        if not self.separable:
            raise InvalidInputError(f"{self.name} is not separable")
        if m > 3:
            raise InvalidInputError('split profiles are cubic splines: derivatives up to order 3')

        def evaluate(s):
            s = np.asarray(s, dtype=float)
            re, im = self._spline_for(np.array([0.0, 0.0, 1.0]))
            inside = np.abs(s) <= self.s_max
            out = np.zeros(s.shape, dtype=complex)
            out[inside] = re(s[inside], m) + 1j * im(s[inside], m)
            return out
        return evaluate

    def _spectrum(self, omega, n):
        return split_multiplier(omega, self.sign, self.k) * self.source.transform(omega, n)


def frequency_split(p: NullProfile, sign: int, k: float = 0.0, s_max: float = None,
                    points: int = 2 ** 14) -> SplitProfile:
    """Profile with spectrum e^{∓ikπ/2}θ(±ω)|ω|^k p̃(ω, n̂); (+, 0) gives f₊."""
    if sign not in (1, -1):
        raise InvalidInputError('sign must be +1 or -1')
    if k < 0:
        raise InvalidInputError('k must be non-negative')
    return SplitProfile(p, sign, k, s_max, points)


def separable_parts(p: NullProfile):
    """(radial, angular) for profiles of the form ρ(s)·a(n̂), otherwise None.

    ``radial(m)`` evaluates the m-th s-derivative of ρ.
    """
    if isinstance(p, SeparableProfile):
        return p.radial, p.angular
    if isinstance(p, SplitProfile) and p.separable:
        return p.radial, p.source.angular
    return None


# --- decay validation ------------------------------------------------------------------


@dataclass
class DecayReport:
    ratios: Dict[Tuple[int, int], float]
    flagged: List[Tuple[int, int]]
    worst: float
    details: Dict[Tuple[int, int], dict] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.flagged


def default_validation_grid(lam: float) -> np.ndarray:
    core = np.linspace(-10.0 * lam, 10.0 * lam, 201)
    tail = np.geomspace(10.0 * lam, 1000.0 * lam, 61)[1:]
    return np.concatenate([-tail[::-1], core, tail])


def validate_decay(p: NullProfile, m_max: int = 2, s_grid=None, directions=None,
                   angular_orders: int = 2, margin: float = 1.05) -> DecayReport:
    """Measure |L^k ∂_s^m f|·(λ+|s|)^{m+1+ε} over a grid and compare with the declared constants."""
    s = default_validation_grid(p.lam) if s_grid is None else np.asarray(s_grid, dtype=float)
    n = SphereGrid.product(6).nodes if directions is None else np.asarray(directions, dtype=float)
    l = lightcone_vector(n)
    ratios: Dict[Tuple[int, int], float] = {}
    details: Dict[Tuple[int, int], dict] = {}
    for m in range(m_max + 1):
        pm = s_derivative(p, m)
        weight = (p.lam + np.abs(s)) ** (m + 1 + p.eps)

        def base(L, _pm=pm):
            return extend_homogeneous(_pm, s[:, None], L[None, :, :])

        measured = {0: np.abs(base(l))}
        if angular_orders >= 1:
            first = np.zeros_like(measured[0])
            second = np.zeros_like(measured[0])
            for a, b in LORENTZ_GENERATORS:
                once = np.abs(lorentz_generator_action(base, a, b, l))
                first = np.maximum(first, once)
                if angular_orders >= 2:
                    def inner(L, _a=a, _b=b):
                        return lorentz_generator_action(base, _a, _b, L)
                    twice = np.abs(lorentz_generator_action(inner, a, b, l, h=1e-2))
                    second = np.maximum(second, twice)
            measured[1] = first
            if angular_orders >= 2:
                measured[2] = second
        for k, values in measured.items():
            scaled = values * weight[:, None]
            index = np.unravel_index(int(np.argmax(scaled)), scaled.shape)
            ratios[(k, m)] = float(scaled[index])
            details[(k, m)] = {'s': float(s[index[0]]), 'n': n[index[1]].tolist()}

    flagged = []
    for key, ratio in ratios.items():
        declared = p.decay_constants.get(key)
        if declared is not None and ratio > margin * declared:
            flagged.append(key)
            logger.warning('decay bound (k=%d, m=%d) of %s exceeded: %.4g > %.4g', key[0], key[1],
                           p.name, ratio, declared)
    worst = max(ratios.values()) if ratios else 0.0
    return DecayReport(ratios, sorted(flagged), worst, details)


# --- radial kernels g --------------------------------------------------------------------


class GKernel:
    """Normalized smooth bump g on [τ₁, τ₂] ⊂ (0, ∞)."""

    def __init__(self, tau1: float = 0.5, tau2: float = 1.5, nodes: int = 400):
        if not 0 < tau1 < tau2:
            raise InvalidInputError(f"support [{tau1}, {tau2}] must lie in (0, ∞)")
        self.tau1 = float(tau1)
        self.tau2 = float(tau2)
        self._x, self._w = gauss_legendre(nodes, self.tau1, self.tau2)
        self._norm = 1.0
        self._norm = float(np.sum(self._w * self._raw(self._x)))

    @property
    def support(self) -> Tuple[float, float]:
        return self.tau1, self.tau2

    def _y(self, u):
        return (2.0 * np.asarray(u, dtype=float) - self.tau1 - self.tau2) / (self.tau2 - self.tau1)

    def _raw(self, u):
        y = self._y(u)
        inside = np.abs(y) < 1
        safe = np.where(inside, y, 0.0)
        return np.where(inside, np.exp(-1.0 / (1.0 - safe ** 2)), 0.0)

    def __call__(self, u):
        return self._raw(u) / self._norm

    def derivative(self, u):
        y = self._y(u)
        inside = np.abs(y) < 1
        safe = np.where(inside, y, 0.0)
        dy = 2.0 / (self.tau2 - self.tau1)
        factor = -2.0 * safe / (1.0 - safe ** 2) ** 2 * dy
        return np.where(inside, factor * self(u), 0.0)

    def h(self, u):
        """d[u g(u)]/du = g + u g'"""
        u = np.asarray(u, dtype=float)
        return self(u) + u * self.derivative(u)

    def r_kernel(self, u):
        """-g - u g', the kernel of d/dR g_R"""
        return -self.h(u)

    def transform(self, u):
        """g̃(u) = (1/2π)∫ e^{iur} g(r) dr; zero past the rule's resolution, where |g̃| < 1e-11."""
        u = np.asarray(u, dtype=float)
        resolved = 0.5 * np.abs(u) * (self.tau2 - self.tau1) <= self._x.size
        phase = np.exp(1j * np.multiply.outer(np.where(resolved, u, 0.0), self._x))
        return np.where(resolved, phase @ (self._w * self(self._x)) / (2.0 * np.pi), 0.0)

    def quadrature(self, nodes: int = None):
        if nodes is None:
            return self._x, self._w
        return gauss_legendre(nodes, self.tau1, self.tau2)


class ScaledKernel:
    """g^η_R(r) = w⁻¹ g(w⁻¹(r - R) + 1), w = λ(R/λ)^η."""

    def __init__(self, g: GKernel, R: float, eta: float = 1.0, lam: float = 1.0):
        self.g = g
        self.R = float(R)
        self.eta = float(eta)
        self.lam = float(lam)
        self.width = self.lam * (self.R / self.lam) ** self.eta

    @property
    def support(self) -> Tuple[float, float]:
        return (self.R + (self.g.tau1 - 1.0) * self.width, self.R + (self.g.tau2 - 1.0) * self.width)

    def _arg(self, r):
        return (np.asarray(r, dtype=float) - self.R) / self.width + 1.0

    def __call__(self, r):
        return self.g(self._arg(r)) / self.width

    def derivative(self, r):
        return self.g.derivative(self._arg(r)) / self.width ** 2

    def transform(self, u):
        u = np.asarray(u, dtype=float)
        return np.exp(1j * (self.R - self.width) * u) * self.g.transform(self.width * u)

    def quadrature(self, nodes: int = 64):
        return gauss_legendre(nodes, *self.support)


def scaled_g(g: GKernel, R: float, eta: float = 1.0, lam: float = 1.0) -> ScaledKernel:
    if not 0 < eta <= 1:
        raise InvalidInputError(f"η must lie in (0, 1], got {eta}")
    if R <= lam:
        raise InvalidInputError(f"R = {R} must exceed λ = {lam}")
    return ScaledKernel(g, R, eta, lam)


class HKernel:
    """h_R(r) = R⁻¹ h(R⁻¹ r) with h = d[u g]/du."""

    def __init__(self, g: GKernel, R: float):
        self.g = g
        self.R = float(R)

    @property
    def support(self) -> Tuple[float, float]:
        return self.g.tau1 * self.R, self.g.tau2 * self.R

    def __call__(self, r):
        return self.g.h(np.asarray(r, dtype=float) / self.R) / self.R

    def quadrature(self, nodes: int = 64):
        return gauss_legendre(nodes, *self.support)


# --- presets -----------------------------------------------------------------------------


@dataclass
class ProfilePreset:
    name: str
    profiles: Tuple[NullProfile, ...]
    infrared_regular: bool
    description: str = ''

    @property
    def profile(self) -> NullProfile:
        return self.profiles[0]


def _tanh(lam):
    profile = SeparableProfile(TanhShape(), constant_angular(1.0), lam=lam, eps=3.0, name='tanh')
    return ProfilePreset('tanh', (profile,), False, 'tanh(s/λ), Δb = 2')


def _gauss_bump(lam):
    profile = SeparableProfile(GaussShape(), dipole_angular(0.5), lam=lam, eps=3.0, name='gauss_bump')
    return ProfilePreset('gauss_bump', (profile,), True, 'exp(-s²/2λ²)(1 + n₃/2), Δb = 0')


def _arctan_angular(lam):
    profile = SeparableProfile(ArctanShape(), dipole_angular(0.5), lam=lam, eps=1.0, name='arctan_angular')
    return ProfilePreset('arctan_angular', (profile,), False, 'arctan(s/λ)(1 + n₃/2), Δb = π(1 + n₃/2)')


def _compact_angular_pair(lam):
    north = SeparableProfile(TanhShape(), cap_angular((0.0, 0.0, 1.0)), lam=lam, eps=3.0, name='cap_north')
    south = SeparableProfile(TanhShape(), cap_angular((0.0, 0.0, -1.0)), lam=lam, eps=3.0, name='cap_south')
    return ProfilePreset('compact_angular_pair', (north, south), False,
                         'tanh(s/λ) on disjoint caps of radius π/3 about ±ẑ')


PRESETS = {
    'tanh': _tanh,
    'gauss_bump': _gauss_bump,
    'arctan_angular': _arctan_angular,
    'compact_angular_pair': _compact_angular_pair,
}


def get_preset(name: str, lam: float = 1.0) -> ProfilePreset:
    factory = PRESETS.get(name)
    if factory is None:
        raise InvalidInputError(f"unknown profile preset {name!r}; known: {', '.join(sorted(PRESETS))}")
    return factory(lam)


def smearing_profile(lam: float = 1.0, angular=None) -> SeparableProfile:
    """f(s, n̂) = (1 + (s/λ)²)^-2 a(n̂), homogeneous of degree -2."""
    return SeparableProfile(Lorentz2Shape(), angular, lam=lam, eps=3.0, degree=-2,
                            name='lorentz2', decay_constants={(0, 0): 4.0 * lam ** 4})


def wave_packet(omega0: float, width: float = 8.0) -> SeparableProfile:
    """b(s) = exp(-s²/2w²) cos(ω₀ s): spectrum concentrated near ±ω₀."""
    return SeparableProfile(PacketShape(omega0 * width), None, lam=width, eps=3.0, name='packet')
