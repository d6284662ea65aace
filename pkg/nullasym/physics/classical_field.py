"""Classical massless fields built from null data, their null asymptotes and spacelike tails.

B(x) = -(1/2π)∫ ḃ(x·l, l) d²l with x·l = x⁰ - x⃗·n̂ in the rest-frame gauge.
"""
from dataclasses import dataclass, field
import logging
from typing import List, Sequence

import numpy as np

from nullasym.exceptions import InvalidInputError
from nullasym.models.geometry import (
    E0,
    FourVector,
    NullDirection,
    SphereGrid,
    minkowski_dot,
)
from nullasym.models.profiles import (
    NullProfile,
    SeparableProfile,
    homogeneous_transform,
    limits,
    s_derivative,
)
from nullasym.utils.extrapolation import extrapolate_in_r
from nullasym.utils.parallel import map_ordered
from nullasym.utils.quadrature import (
    composite_gauss_legendre,
    graded_breaks,
    polar_product,
)

logger = logging.getLogger(__name__)

Z_AXIS = np.array([0.0, 0.0, 1.0])


def _points(x) -> np.ndarray:
    if isinstance(x, FourVector):
        return x.components
    return np.asarray(x, dtype=float)


def _direction(l) -> np.ndarray:
    if isinstance(l, NullDirection):
        return l.n_hat
    n = np.asarray(l, dtype=float)
    if n.shape == (4,):
        n = n[1:] / n[0]
    return n / np.linalg.norm(n)


# --- field handles ---------------------------------------------------------------------


class FieldHandle:
    """A field B(x) with its gradient ∂_a B (components in the last axis)."""

    def __call__(self, x):
        raise NotImplementedError

    def gradient(self, x):
        raise NotImplementedError


class ConstantField(FieldHandle):
    def __init__(self, value: complex = 1.0):
        self.value = value

    def __call__(self, x):
        x = _points(x)
        return np.full(x.shape[:-1], self.value)

    def gradient(self, x):
        x = _points(x)
        return np.zeros(x.shape)


class PlaneWave(FieldHandle):
    """B(x) = A·e^{-ik·x}."""

    def __init__(self, k, amplitude: complex = 1.0):
        self.k = _points(k)
        self.amplitude = amplitude

    def __call__(self, x):
        return self.amplitude * np.exp(-1j * minkowski_dot(_points(x), self.k))

    def gradient(self, x):
        k_lower = self.k * np.array([1.0, -1.0, -1.0, -1.0])
        return -1j * k_lower * self(x)[..., None]


class SphericalWave(FieldHandle):
    """Closed form for angular-independent null data h(s):

    B(x) = -[h(x⁰ + |x⃗|) - h(x⁰ - |x⃗|)]/|x⃗|, with the limit -2ḣ(x⁰) at the origin.
    """

    SERIES_RADIUS = 1e-5

    def __init__(self, profile: NullProfile):
        self.profile = profile

    def _h(self, m, s):
        return self.profile.derivative(m)(s, Z_AXIS)

    def __call__(self, x):
        x = _points(x)
        t = x[..., 0]
        r = np.linalg.norm(x[..., 1:], axis=-1)
        small = r < self.SERIES_RADIUS
        safe = np.where(small, 1.0, r)
        value = -(self._h(0, t + safe) - self._h(0, t - safe)) / safe
        series = -2.0 * self._h(1, t) - r ** 2 / 3.0 * self._h(3, t)
        return np.where(small, series, value)

    def gradient(self, x):
        x = _points(x)
        t = x[..., 0]
        r = np.linalg.norm(x[..., 1:], axis=-1)
        small = r < self.SERIES_RADIUS
        safe = np.where(small, 1.0, r)
        a, b = t + safe, t - safe
        d0 = -(self._h(1, a) - self._h(1, b)) / safe
        dr = -(self._h(1, a) + self._h(1, b)) / safe + (self._h(0, a) - self._h(0, b)) / safe ** 2
        spatial = (dr / safe)[..., None] * x[..., 1:]
        d0 = np.where(small, -2.0 * self._h(2, t), d0)
        spatial = np.where(small[..., None], (-2.0 / 3.0 * self._h(3, t))[..., None] * x[..., 1:], spatial)
        return np.concatenate([d0[..., None], spatial], axis=-1)


class NullDataField(FieldHandle):
    """Sphere quadrature of the null-data representation on a fixed grid."""

    def __init__(self, profile: NullProfile, grid: SphereGrid = None, n_theta: int = 64):
        self.profile = profile
        self.grid = grid if grid is not None else SphereGrid.product(n_theta)
        self._bdot = profile.derivative(1)
        self._bddot = profile.derivative(2)

    def _phases(self, x):
        x = _points(x)
        n = self.grid.nodes
        return x[..., :1] - x[..., 1:] @ n.T

    def __call__(self, x):
        s = self._phases(x)
        values = self._bdot(s, self.grid.nodes)
        return -(values @ self.grid.weights) / (2.0 * np.pi)

    def gradient(self, x):
        s = self._phases(x)
        values = self._bddot(s, self.grid.nodes) * self.grid.weights
        l_lower = np.concatenate([np.ones((self.grid.size, 1)), -self.grid.nodes], axis=1)
        return -(values @ l_lower) / (2.0 * np.pi)


def field_from_profile(p: NullProfile, n_theta: int = 64) -> FieldHandle:
    """Closed-form spherical wave for isotropic separable data, sphere quadrature otherwise."""
    if isinstance(p, SeparableProfile) and p.is_isotropic():
        return SphericalWave(p)
    return NullDataField(p, n_theta=n_theta)


def evaluate_field(p: NullProfile, x, n_theta: int = 64, refine: bool = True, tol: float = 1e-9):
    """B(x) by sphere quadrature; a refined grid checks convergence when ``refine`` is set."""
    if p.eps <= 0:
        raise InvalidInputError(f"null data needs ε > 0, got {p.eps}")
    value = NullDataField(p, n_theta=n_theta)(x)
    if refine:
        fine = NullDataField(p, n_theta=2 * n_theta)(x)
        gap = float(np.max(np.abs(fine - value)))
        scale = max(1.0, float(np.max(np.abs(fine))))
        if gap > tol * scale:
            logger.warning('field quadrature not converged at N_θ = %d: refinement changed B by %.3e',
                           n_theta, gap)
        value = fine
    return value


# --- momentum representation ------------------------------------------------------------


class MomentumProfile:
    """c(ωl) = -ḃ̃(ω, l)/ω, carried as the regular combination ω·c = -ḃ̃."""

    def __init__(self, profile: NullProfile):
        self.profile = profile
        self._bdot = s_derivative(profile, 1)

    def omega_c(self, omega, n):
        """ω·c(ωl) for l = (1, n̂)."""
        return -self.profile.transform_derivative(omega, n)

    def value(self, omega, l):
        """c(ωl) for any future null l, through the degree -2 scaling of ḃ̃."""
        omega = np.asarray(omega, dtype=float)
        if np.any(omega == 0):
            raise InvalidInputError('c(k) is singular at k = 0; use omega_c')
        return -homogeneous_transform(self._bdot, omega, l) / omega

    def delta_b(self, n):
        """Δb(l) = 2π·ḃ̃(0, l)."""
        return 2.0 * np.pi * self.profile.transform_derivative(0.0, n)


def frequency_rule(lam: float, extent: float, omega_max: float = None, nodes: int = 8):
    """Composite rule on [-Ω, Ω] with panels fine enough for phases up to ``extent``."""
    if omega_max is None:
        omega_max = 24.0 / lam
    width = min(0.5 / lam, 2.0 / (1.0 + extent))
    # an even panel count keeps ω = 0 on a break, where |ω|-type spectra have a kink
    count = 2 * max(1, int(np.ceil(omega_max / width)))
    return composite_gauss_legendre(np.linspace(-omega_max, omega_max, count + 1), nodes)


def evaluate_field_momentum(c: MomentumProfile, x, n_theta: int = None, omega_max: float = None,
                            chunk: int = 128, tail_threshold: float = 1e-10):
    """B(x) = (1/2π)∫d²l ∫dω ω·c(ωl) e^{-iω x·l}, the lightcone form of the Fourier representation."""
    x = _points(x)
    radius = float(np.max(np.linalg.norm(x[..., 1:], axis=-1)))
    extent = float(np.max(np.abs(x[..., 0]))) + radius
    omega, weights = frequency_rule(c.profile.lam, extent, omega_max)
    if n_theta is None:
        n_theta = min(96, 24 + int(np.ceil(0.5 * omega[-1] * radius)))
    grid = SphereGrid.product(n_theta)

    edge = float(np.max(np.abs(c.omega_c(omega[[0, -1], None], grid.nodes[None, :, :]))))
    peak = 0.0
    phase_arg = x[..., :1] - x[..., 1:] @ grid.nodes.T
    total = np.zeros(phase_arg.shape[:-1], dtype=complex)
    for start in range(0, omega.size, chunk):
        stop = start + chunk
        block = c.omega_c(omega[start:stop, None], grid.nodes[None, :, :])
        peak = max(peak, float(np.max(np.abs(block))))
        block_omega = omega[start:stop].reshape((-1,) + (1,) * phase_arg.ndim)
        phases = np.exp(-1j * block_omega * phase_arg[None, ...])
        total += np.einsum('k,kn,k...n->...', weights[start:stop], block * grid.weights[None, :], phases)
    if peak > 0 and edge > tail_threshold * peak:
        logger.warning('momentum quadrature tail %.3e above %.1e of the peak; raise omega_max',
                       edge / peak, tail_threshold)
    result = total / (2.0 * np.pi)
    if np.all(np.abs(result.imag) <= 1e-12 * max(1.0, float(np.max(np.abs(result))))):
        return result.real
    return result


# --- null asymptotes and spacelike tails -------------------------------------------------


@dataclass
class AsymptoteResult:
    limit: complex
    rate: float
    reliable: bool
    expected: complex
    table: List[dict] = field(default_factory=list)

    @property
    def error(self) -> float:
        return abs(self.limit - self.expected)


def _null_scaled_field(p: NullProfile, x: np.ndarray, m_hat: np.ndarray, r: float,
                       sign: int, n_phi: int, nodes: int) -> complex:
    """r·B(x + σ r l) by quadrature in v = r(1 - n̂·m̂) about the direction m̂."""
    lam = p.lam
    breaks = graded_breaks(0.5 * lam, min(40.0 * lam, 2.0 * r), 2.0 * r)
    v, wv = composite_gauss_legendre(breaks, nodes)
    u = 1.0 - v / r
    n, w = polar_product(u, wv, n_phi, m_hat)
    v_nodes = np.repeat(v, n_phi)
    s = x[0] - n @ x[1:] + sign * v_nodes
    values = p.derivative(1)(s, n)
    return -np.sum(w * values) / (2.0 * np.pi)


def null_asymptote(p: NullProfile, x, l, r_list: Sequence[float], sign: int = 1,
                   n_phi: int = 64, nodes: int = 8, degree: int = 3, threads: int = None) -> AsymptoteResult:
    """Limit of r·B(x ± r l) as r → ∞, compared with b_out (future) or -b_in (past)."""
    if sign not in (1, -1):
        raise InvalidInputError('sign must be +1 (future) or -1 (past)')
    r = np.asarray(r_list, dtype=float)
    if np.any(np.diff(r) <= 0):
        raise InvalidInputError('r_list must be strictly increasing')
    if r[0] <= 10.0 * p.lam:
        raise InvalidInputError(f"r_list must start above 10λ = {10.0 * p.lam}")
    x = _points(x)
    m_hat = _direction(l)

    values = map_ordered(lambda radius: _null_scaled_field(p, x, m_hat, radius, sign, n_phi, nodes),
                         r.tolist(), threads)
    fit = extrapolate_in_r(r, values, min(degree, len(r) - 1))

    s0 = x[0] - float(m_hat @ x[1:])
    b0 = complex(np.asarray(p(s0, m_hat)))
    lo, hi = limits(p, m_hat)
    expected = b0 - complex(np.asarray(hi)) if sign > 0 else complex(np.asarray(lo)) - b0
    if not fit.reliable:
        logger.warning('null asymptote rate unreliable for n̂ = %s', m_hat.tolist())
    return AsymptoteResult(fit.limit, fit.rate, fit.reliable, expected, fit.table)


def tail_reference(p: NullProfile, y, n_phi: int = 256) -> complex:
    """-(1/2π)∫Δb(l) δ(y·l) d²l as a circle integral on the sphere."""
    y = _points(y)
    q = float(np.linalg.norm(y[1:]))
    if minkowski_dot(y, y) >= 0:
        raise InvalidInputError('y must be spacelike')
    u0 = y[0] / q
    n, w = polar_product(np.array([u0]), np.array([1.0]), n_phi, y[1:] / q)
    lo, hi = limits(p, n)
    return complex(-np.sum(w * (np.asarray(hi) - np.asarray(lo))) / (2.0 * np.pi * q))


def _spacelike_scaled_field(p: NullProfile, x: np.ndarray, y: np.ndarray, r: float,
                            n_phi: int, nodes: int) -> complex:
    """r·B(x + r y) with v = r|y⃗|(n̂·ŷ - u₀) centred on the circle y·l = 0."""
    q = float(np.linalg.norm(y[1:]))
    axis = y[1:] / q
    u0 = y[0] / q
    lam = p.lam
    parts_v, parts_w = [], []
    for side, extent in ((1.0, r * q * (1.0 - u0)), (-1.0, r * q * (1.0 + u0))):
        breaks = graded_breaks(0.5 * lam, min(40.0 * lam, extent), extent)
        v, wv = composite_gauss_legendre(breaks, nodes)
        parts_v.append(side * v)
        parts_w.append(wv)
    v = np.concatenate(parts_v)
    wv = np.concatenate(parts_w)
    u = np.clip(u0 + v / (r * q), -1.0, 1.0)
    n, w = polar_product(u, wv / q, n_phi, axis)
    v_nodes = np.repeat(v, n_phi)
    s = x[0] - n @ x[1:] - v_nodes
    values = p.derivative(1)(s, n)
    return -np.sum(w * values) / (2.0 * np.pi)


def spacelike_tail(p: NullProfile, x, y, r_list: Sequence[float], n_phi: int = 64, nodes: int = 8,
                   degree: int = 3, threads: int = None) -> AsymptoteResult:
    """Limit of r·B(x + r y) for spacelike y against the circle-integral reference."""
    y = _points(y)
    if minkowski_dot(y, y) >= 0:
        raise InvalidInputError('y must be spacelike')
    r = np.asarray(r_list, dtype=float)
    if np.any(np.diff(r) <= 0):
        raise InvalidInputError('r_list must be strictly increasing')
    x = _points(x)
    values = map_ordered(lambda radius: _spacelike_scaled_field(p, x, y, radius, n_phi, nodes),
                         r.tolist(), threads)
    fit = extrapolate_in_r(r, values, min(degree, len(r) - 1))
    return AsymptoteResult(fit.limit, fit.rate, fit.reliable, tail_reference(p, y), fit.table)


def wave_residual(source, x, h: float):
    """Second-order central-difference d'Alembertian □B = ∂₀²B - ∇²B at x."""
    handle = NullDataField(source) if isinstance(source, NullProfile) else source
    lam = source.lam if isinstance(source, NullProfile) else 1.0
    if not 1e-3 * lam <= h <= 1e-1 * lam:
        raise InvalidInputError(f"step h = {h} outside [1e-3, 1e-1]·λ")
    x = _points(x)
    center = handle(x)
    total = 0.0
    for a, metric in enumerate((1.0, -1.0, -1.0, -1.0)):
        e = np.zeros(4)
        e[a] = h
        total = total + metric * (handle(x + e) - 2.0 * center + handle(x - e)) / h ** 2
    return total


@dataclass
class ReconstructionReport:
    max_deviation: float
    table: List[dict] = field(default_factory=list)


def reconstruct_outgoing(p: NullProfile, s_grid: Sequence[float], directions, r_list: Sequence[float],
                         sign: int = 1, threads: int = None) -> ReconstructionReport:
    """Recover b_out (or -b_in) on an (s, n̂) grid from field values along null rays."""
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    cases = [(float(s), n) for s in s_grid for n in directions]

    def run(case):
        s, n = case
        result = null_asymptote(p, s * E0, n, r_list, sign=sign, threads=1)
        return {'s': s, 'n': n.tolist(), 'limit': result.limit, 'expected': result.expected,
                'deviation': result.error}

    table = map_ordered(run, cases, threads)
    worst = max((row['deviation'] for row in table), default=0.0)
    return ReconstructionReport(worst, table)

