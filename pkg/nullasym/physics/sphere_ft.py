"""Fourier transforms of smooth functions on the unit sphere.

∫ e^{-iq⃗·n̂} f(n̂) dΩ splits into two phase terms at n̂ = ±q̂ and a remainder.
The remainder has a momentum form (a kernel acting on M⃗f = n̂ × ∇f) and a
position form (a cap integral of Δ_S f); both are computed here together
with the bound on the position form.
"""
from dataclasses import dataclass
from functools import cached_property
import logging
from typing import Callable, Optional

import numpy as np

from nullasym.exceptions import InvalidInputError, ResolutionError
from nullasym.models.geometry import (
    SphereGrid,
    angular_momentum_action,
    from_angles,
    surface_laplacian,
)
from nullasym.models.profiles import NullProfile
from nullasym.utils.helpers import unit_vector
from nullasym.utils.quadrature import gauss_legendre, periodic_trapezoid, polar_product, rotation_to_axis

logger = logging.getLogger(__name__)

MIN_ORDER = 64
NODES_PER_UNIT = 4
MAX_FREQUENCY = 1.0e3
CAP_RADIUS = 1.0e-3
SINGULAR_BAND = 1.0e-6
SMOOTHNESS_LIMIT = 1.0e8

_AXES = np.array([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 1.0, 0.0],
                  [0.0, -1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])


class SphereFunction:
    """A smooth f(n̂) with optional closed forms for Δ_S f and M⃗f.

    Without closed forms both fall back to finite differences of the
    degree-0 extension.
    """

    def __init__(self, evaluator: Callable[[np.ndarray], np.ndarray], laplacian: Callable = None,
                 angular_momentum: Callable = None, name: str = 'f', validate: bool = True):
        self.evaluator = evaluator
        self.laplacian = laplacian
        self.angular_momentum = angular_momentum
        self.name = name
        if validate:
            self.validate()

    def __call__(self, n):
        return np.asarray(self.evaluator(np.asarray(n, dtype=float)))

    def laplacian_at(self, n) -> np.ndarray:
        return surface_laplacian(self.evaluator, n, analytic=self.laplacian)

    def angular_momentum_at(self, n) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        if self.angular_momentum is not None:
            return np.asarray(self.angular_momentum(n))
        return angular_momentum_action(self.evaluator, n)

    @cached_property
    def laplacian_sup(self) -> float:
        """‖Δ_S f‖_∞ sampled on a product grid and the six coordinate poles."""
        points = np.concatenate([SphereGrid.product(64).nodes, _AXES])
        return float(np.max(np.abs(self.laplacian_at(points))))

    def validate(self, n_theta: int = 8):
        """Reject functions whose values or angular differences blow up on a coarse stencil."""
        points = SphereGrid.product(n_theta).nodes
        values = self(points)
        if not np.all(np.isfinite(values)):
            raise InvalidInputError(f"{self.name} is not finite on the sphere")
        second = self.laplacian_at(points)
        worst = float(np.max(np.abs(second))) if np.all(np.isfinite(second)) else float('inf')
        if worst > SMOOTHNESS_LIMIT:
            raise InvalidInputError(f"{self.name} is not smooth: |Δ_S f| reaches {worst:.3g}")

    def __repr__(self) -> str:
        return f"SphereFunction({self.name!r})"


def constant_function(value: complex = 1.0) -> SphereFunction:
    def evaluate(n):
        return np.full(np.asarray(n).shape[:-1], value)

    def zero(n):
        return np.zeros(np.asarray(n).shape[:-1])

    def zero_vector(n):
        return np.zeros(np.asarray(n).shape)

    return SphereFunction(evaluate, zero, zero_vector, name=f"const({value})")


def component_function(axis=(0.0, 0.0, 1.0)) -> SphereFunction:
    """f(n̂) = n̂·axis, with Δ_S f = -2f and M⃗f = n̂ × axis."""
    a = unit_vector(axis)

    def evaluate(n):
        return np.asarray(n) @ a

    def laplacian(n):
        return -2.0 * (np.asarray(n) @ a)

    def angular_momentum(n):
        n = np.asarray(n)
        return np.cross(n, np.broadcast_to(a, n.shape))

    return SphereFunction(evaluate, laplacian, angular_momentum, name=f"n.{a.tolist()}")


def harmonic_sum(vectors, coefficients, degrees, name: str = 'harmonic') -> SphereFunction:
    """f(n̂) = Σ c_j (a⃗_j·n̂)^{l_j} with complex null vectors a⃗_j (a⃗·a⃗ = 0).

    Each term is a spherical harmonic of degree l_j, so Δ_S f and M⃗f are exact.
    """
    a = np.asarray(vectors, dtype=complex)
    c = np.asarray(coefficients, dtype=complex)
    l = np.asarray(degrees, dtype=int)
    if np.max(np.abs(np.einsum('ji,ji->j', a, a))) > 1e-12:
        raise InvalidInputError('harmonic terms need null vectors a·a = 0')

    def evaluate(n):
        return (np.asarray(n) @ a.T) ** l @ c

    def laplacian(n):
        return (np.asarray(n) @ a.T) ** l @ (-l * (l + 1) * c)

    def angular_momentum(n):
        n = np.asarray(n, dtype=float)
        dots = n @ a.T
        powers = np.where(l > 0, dots ** np.maximum(l - 1, 0), 0.0)
        grad = (powers * l * c) @ a
        return np.cross(n, grad)

    return SphereFunction(evaluate, laplacian, angular_momentum, name=name)


def random_band_limited(rng: np.random.Generator, l_max: int = 4, terms: int = 2) -> SphereFunction:
    """Random combination of harmonics of degree ≤ l_max."""
    vectors, coefficients, degrees = [], [], []
    for degree in range(l_max + 1):
        for _ in range(terms):
            u = rng.normal(size=3)
            u /= np.linalg.norm(u)
            v = np.cross(u, rng.normal(size=3))
            v /= np.linalg.norm(v)
            vectors.append((u + 1j * v) / np.sqrt(2.0))
            coefficients.append(complex(rng.normal(), rng.normal()) / (1 + degree))
            degrees.append(degree)
    return harmonic_sum(vectors, coefficients, degrees, name=f"band(l<={l_max})")


def profile_slice(f: NullProfile, s: float) -> SphereFunction:
    """The angular function n̂ ↦ f(s, n̂) of a null profile at fixed retarded time."""
    def evaluate(n):
        n = np.asarray(n, dtype=float)
        return f(np.full(n.shape[:-1], s), n)

    return SphereFunction(evaluate, name=f"{f.name}(s={s:g})")


# --- momentum side -------------------------------------------------------------------------


def required_order(q_norm: float) -> int:
    return max(MIN_ORDER, int(np.ceil(NODES_PER_UNIT * q_norm)))


def _resolve_order(q_norm: float, order: Optional[int]) -> int:
    needed = required_order(q_norm)
    if q_norm > MAX_FREQUENCY:
        raise ResolutionError(f"|q| = {q_norm:g} exceeds the supported {MAX_FREQUENCY:g}", needed)
    if order is None:
        return needed
    if order < needed:
        raise ResolutionError(f"order {order} cannot resolve |q| = {q_norm:g}", needed)
    return int(order)


def _axis_of(q: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(q)
    return q / norm if norm > 0 else np.array([0.0, 0.0, 1.0])


def sphere_fourier(f: SphereFunction, q, order: int = None, n_phi: int = 64) -> complex:
    """∫ e^{-iq⃗·n̂} f(n̂) dΩ with Gauss-Legendre in q̂·n̂ and trapezoid in φ."""
    q = np.asarray(q, dtype=float)
    q_norm = float(np.linalg.norm(q))
    n_u = _resolve_order(q_norm, order)
    u, wu = gauss_legendre(n_u)
    nodes, weights = polar_product(u, wu, n_phi, _axis_of(q))
    return complex(np.sum(weights * np.exp(-1j * (nodes @ q)) * f(nodes)))


def boundary_expansion(f: SphereFunction, q) -> complex:
    """(2πi/|q⃗|)(e^{-i|q⃗|} f(q̂) - e^{i|q⃗|} f(-q̂))"""
    q = np.asarray(q, dtype=float)
    q_norm = float(np.linalg.norm(q))
    if q_norm == 0.0:
        raise InvalidInputError('boundary expansion is singular at q = 0')
    q_hat = q / q_norm
    ends = f(np.stack([q_hat, -q_hat]))
    return complex(2j * np.pi / q_norm * (np.exp(-1j * q_norm) * ends[0] - np.exp(1j * q_norm) * ends[1]))


def remainder_momentum(f: SphereFunction, q, order: int = None, n_phi: int = 64,
                       cap: float = CAP_RADIUS) -> complex:
    """i∫ e^{-iq⃗·n̂} (q⃗ × n̂)/|q⃗ × n̂|² · M⃗f dΩ.

    Caps of radius ``cap`` around ±q̂ are excised; over each cap the phase is
    frozen at its pole value so the θ-integral of ∂_θ f becomes a difference
    of values.
    """
    q = np.asarray(q, dtype=float)
    q_norm = float(np.linalg.norm(q))
    if q_norm == 0.0:
        raise InvalidInputError('remainder kernel is singular at q = 0')
    n_theta = _resolve_order(q_norm, order)
    q_hat = q / q_norm
    rotation = rotation_to_axis(q_hat)

    theta, wt = gauss_legendre(n_theta, cap, np.pi - cap)
    phi, wphi = periodic_trapezoid(n_phi)
    sin_t = np.sin(theta)
    local = from_angles(theta[:, None], phi[None, :]).reshape(-1, 3)
    n = local @ rotation.T
    weights = ((wt * sin_t)[:, None] * wphi[None, :]).ravel()

    cross = np.cross(np.broadcast_to(q, n.shape), n)
    kernel = cross / np.sum(cross * cross, axis=-1, keepdims=True)
    projected = np.einsum('ij,ij->i', kernel, f.angular_momentum_at(n))
    bulk = 1j * np.sum(weights * np.exp(-1j * (n @ q)) * projected)

    rings = np.stack([
        from_angles(cap, phi) @ rotation.T,
        from_angles(np.pi - cap, phi) @ rotation.T,
    ])
    poles = f(np.stack([q_hat, -q_hat]))
    north = np.exp(-1j * q_norm) * np.sum(wphi * (f(rings[0]) - poles[0]))
    south = np.exp(1j * q_norm) * np.sum(wphi * (poles[1] - f(rings[1])))
    return complex(bulk + 1j / q_norm * (north + south))


@dataclass
class ExpansionTerms:
    direct: complex
    boundary: complex
    remainder: complex

    @property
    def residual(self) -> float:
        return float(abs(self.direct - self.boundary - self.remainder))


def expansion_terms(f: SphereFunction, q, order: int = None, n_phi: int = 64) -> ExpansionTerms:
    return ExpansionTerms(
        direct=sphere_fourier(f, q, order, n_phi),
        boundary=boundary_expansion(f, q),
        remainder=remainder_momentum(f, q, order, n_phi),
    )


def remainder_consistency(f: SphereFunction, q, order: int = None, n_phi: int = 64) -> float:
    """|direct - boundary - remainder| for the expansion at q⃗."""
    return expansion_terms(f, q, order, n_phi).residual


# --- position side -------------------------------------------------------------------------


def _cap_rule(z: np.ndarray, order: int, n_phi: int):
    z_norm = float(np.linalg.norm(z))
    u, wu = gauss_legendre(order, 1.0 / z_norm, 1.0)
    return polar_product(u, wu, n_phi, z / z_norm)


def _check_position(z: np.ndarray) -> float:
    z_norm = float(np.linalg.norm(z))
    if abs(z_norm - 1.0) < SINGULAR_BAND:
        raise InvalidInputError(f"|z| = {z_norm!r} is within {SINGULAR_BAND:g} of the singular sphere |z| = 1")
    return z_norm


def _real_if_real(value: complex):
    value = complex(value)
    return value.real if value.imag == 0.0 else value


def remainder_position(f: SphereFunction, z, order: int = 64, n_phi: int = 64):
    """R(z⃗) = -(|z⃗|² - 1)⁻¹ ∫_{z⃗·n̂ ≥ 1} Δ_S f dΩ; zero inside the unit ball."""
    z = np.asarray(z, dtype=float)
    z_norm = _check_position(z)
    if z_norm < 1.0:
        return 0.0
    nodes, weights = _cap_rule(z, order, n_phi)
    total = np.sum(weights * f.laplacian_at(nodes))
    return _real_if_real(-total / (z_norm ** 2 - 1.0))


@dataclass
class PositionBound:
    value: complex
    bound: float

    @property
    def ok(self) -> bool:
        return abs(self.value) <= self.bound * (1.0 + 1e-12)


def position_bound(f: SphereFunction, z, order: int = 64, n_phi: int = 64) -> PositionBound:
    """R(z⃗) against 2π‖Δ_S f‖_∞ / (|z⃗|(|z⃗| + 1)) for |z⃗| > 1."""
    z = np.asarray(z, dtype=float)
    z_norm = _check_position(z)
    value = remainder_position(f, z, order, n_phi)
    if z_norm < 1.0:
        return PositionBound(value, 0.0)
    nodes, _ = _cap_rule(z, order, n_phi)
    sup = max(f.laplacian_sup, float(np.max(np.abs(f.laplacian_at(nodes)))))
    result = PositionBound(value, 2.0 * np.pi * sup / (z_norm * (z_norm + 1.0)))
    if not result.ok:
        logger.warning('position remainder bound violated at |z| = %.6g: %.6g > %.6g',
                       z_norm, abs(value), result.bound)
    return result


# --- smearing measure ----------------------------------------------------------------------


@dataclass
class MeasureTransform:
    direct: complex
    boundary: complex
    remainder: complex

    @property
    def residual(self) -> float:
        return float(abs(self.direct - self.boundary - self.remainder))


def measure_transform_check(f: NullProfile, x0: float, r: float, p, order: int = None,
                            n_phi: int = 64) -> MeasureTransform:
    """Transform of the cylinder measure (2πr)⁻¹δ(|x⃗| - r) f(x⁰ - r, n̂) at momentum p⃗.

    direct = (r/(2π)²) ∫ e^{-irp⃗·n̂} f(x⁰ - r, n̂) dΩ, compared with the phase
    terms (i/(2π|p⃗|))[e^{-ir|p⃗|} f(x⁰ - r, p̂) - e^{ir|p⃗|} f(x⁰ - r, -p̂)]
    plus the scaled momentum remainder.
    """
    if r <= 0:
        raise InvalidInputError(f"r must be positive, got {r}")
    p = np.asarray(p, dtype=float)
    p_norm = float(np.linalg.norm(p))
    if p_norm == 0.0:
        raise InvalidInputError('measure expansion is singular at p = 0')
    angular = profile_slice(f, x0 - r)
    scale = r / (2.0 * np.pi) ** 2
    p_hat = p / p_norm
    ends = angular(np.stack([p_hat, -p_hat]))
    boundary = 1j / (2.0 * np.pi * p_norm) * (np.exp(-1j * r * p_norm) * ends[0]
                                              - np.exp(1j * r * p_norm) * ends[1])
    return MeasureTransform(
        direct=scale * sphere_fourier(angular, r * p, order, n_phi),
        boundary=complex(boundary),
        remainder=scale * remainder_momentum(angular, r * p, order, n_phi),
    )
