"""One- and two-particle wavefunctions of the free massless field in momentum space.

A one-particle vector is sampled on a log-spaced radial grid ω = |p⃗| times a
SphereGrid of directions, with the invariant measure d³p/(2|p⃗|)/(2π)³
attached. Off-shell data (the one-particle components of BΩ) live on a
stack of mass slices, slice 0 being the lightcone sheet p² = 0.
"""
from functools import lru_cache
import logging
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from nullasym.exceptions import InvalidInputError
from nullasym.models.geometry import SphereGrid
from nullasym.utils.quadrature import composite_gauss_legendre, gauss_legendre

logger = logging.getLogger(__name__)

RADIAL_NODES = 256
PANEL_NODES = 8
DECADES = 8.0
MASS_SLICES = 16
TAIL_TOLERANCE = 1e-8
DENSE_LIMIT = 4096

WaveFunc = Callable[[np.ndarray, np.ndarray], np.ndarray]


@lru_cache(maxsize=16)
def radial_rule(omega_max: float, nodes: int = RADIAL_NODES, decades: float = DECADES) -> Tuple[np.ndarray, np.ndarray]:
    """Rule for ∫₀^ω_max F(ω) dω: Gauss-Legendre panels in log ω over ``decades`` decades."""
    if omega_max <= 0:
        raise InvalidInputError(f"ω_max must be positive, got {omega_max}")
    if nodes < PANEL_NODES or nodes % PANEL_NODES:
        raise InvalidInputError(f"radial node count must be a multiple of {PANEL_NODES}, got {nodes}")
    top = np.log(omega_max)
    breaks = np.linspace(top - decades * np.log(10.0), top, nodes // PANEL_NODES + 1)
    t, wt = composite_gauss_legendre(breaks, PANEL_NODES)
    omega = np.exp(t)
    weights = wt * omega
    omega.setflags(write=False)
    weights.setflags(write=False)
    return omega, weights


def _sphere(n_theta: int) -> SphereGrid:
    return SphereGrid.product(n_theta)


class MomentumWavefunction:
    """Samples ψ(ω, n̂) of a one-particle vector on the lightcone sheet."""

    def __init__(self, omega, radial_weights, grid: SphereGrid, samples, lam: float = 1.0,
                 decay: Optional[float] = None, name: str = 'psi'):
        omega = np.asarray(omega, dtype=float)
        samples = np.asarray(samples, dtype=complex)
        if np.any(omega <= 0):
            raise InvalidInputError('radial nodes must be positive; ω = 0 is excluded from the grid')
        if samples.shape != (omega.size, grid.size):
            raise InvalidInputError(f"samples of shape {samples.shape} do not fit the "
                                    f"({omega.size}, {grid.size}) grid")
        self.omega = omega
        self.radial_weights = np.asarray(radial_weights, dtype=float)
        self.grid = grid
        self.samples = samples
        self.lam = float(lam)
        self.decay = decay
        self.name = name
        self.envelope_violations = self._check_envelope()

    @classmethod
    def sample(cls, func: WaveFunc, lam: float = 1.0, omega_max: float = None, n_theta: int = 16,
               nodes: int = RADIAL_NODES, decay: Optional[float] = None, name: str = 'psi') -> 'MomentumWavefunction':
        """ψ = func(ω, n̂) on the default grid; ω_max defaults to 8/λ."""
        if lam <= 0:
            raise InvalidInputError(f"length scale λ must be positive, got {lam}")
        omega, weights = radial_rule(float(8.0 / lam if omega_max is None else omega_max), nodes)
        grid = _sphere(n_theta)
        values = func(omega[:, None], grid.nodes[None, :, :])
        samples = np.broadcast_to(np.asarray(values, dtype=complex), (omega.size, grid.size))
        return cls(omega, weights, grid, samples.copy(), lam, decay, name)

    def _check_envelope(self) -> int:
        if self.decay is None:
            return 0
        bound = self.decay * (self.lam + self.omega[:, None]) ** -2
        violations = int(np.count_nonzero(np.abs(self.samples) > bound * (1.0 + 1e-12)))
        if violations:
            logger.warning('%s: decay envelope C(λ+ω)^-2 fails at %d of %d samples',
                           self.name, violations, self.samples.size)
        return violations

    @property
    def measure(self) -> np.ndarray:
        """d³p/(2|p⃗|)/(2π)³ per grid node."""
        radial = 0.5 * self.omega * self.radial_weights
        return radial[:, None] * self.grid.weights[None, :] / (2.0 * np.pi) ** 3

    @property
    def omega_max(self) -> float:
        return float(self.omega[-1])

    def tail_fraction(self) -> float:
        """Share of ‖ψ‖² carried by ω > ω_max/2."""
        density = self.measure * np.abs(self.samples) ** 2
        total = float(np.sum(density))
        if total == 0.0:
            return 0.0
        return float(np.sum(density[self.omega > 0.5 * self.omega_max])) / total

    def same_grid(self, other: 'MomentumWavefunction') -> bool:
        return (self.samples.shape == other.samples.shape
                and np.array_equal(self.omega, other.omega)
                and np.array_equal(self.grid.nodes, other.grid.nodes))

    def dot(self, other: 'MomentumWavefunction') -> complex:
        return complex(np.sum(self.measure * np.conj(self.samples) * other.samples))

    def norm_sq(self) -> float:
        return float(self.dot(self).real)

    def with_samples(self, samples, name: str = None) -> 'MomentumWavefunction':
        return MomentumWavefunction(self.omega, self.radial_weights, self.grid, samples, self.lam,
                                    None, name or self.name)

    def multiply(self, factor, name: str = None) -> 'MomentumWavefunction':
        return self.with_samples(self.samples * factor, name)

    def _check(self, other: 'MomentumWavefunction'):
        if not self.same_grid(other):
            raise InvalidInputError(f"{self.name} and {other.name} live on different momentum grids")

    def __add__(self, other: 'MomentumWavefunction') -> 'MomentumWavefunction':
        self._check(other)
        return self.with_samples(self.samples + other.samples, f"{self.name}+{other.name}")

    def __sub__(self, other: 'MomentumWavefunction') -> 'MomentumWavefunction':
        self._check(other)
        return self.with_samples(self.samples - other.samples, f"{self.name}-{other.name}")

    def __mul__(self, scalar) -> 'MomentumWavefunction':
        return self.with_samples(complex(scalar) * self.samples)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return (f"MomentumWavefunction({self.name!r}, radial={self.omega.size}, "
                f"directions={self.grid.size}, omega_max={self.omega_max:g})")


def mass_rule(m_max: float, slices: int = MASS_SLICES) -> Tuple[np.ndarray, np.ndarray]:
    """Slice 0 is the sheet m = 0 with weight 1; the rest are Gauss-Legendre nodes in m on (0, m_max)."""
    if slices < 2:
        raise InvalidInputError('a mass-spread grid needs the sheet and at least one massive slice')
    m, w = gauss_legendre(slices - 1, 0.0, m_max)
    return np.concatenate([[0.0], m]), np.concatenate([[1.0], w])


class MassSpreadWavefunction:
    """Off-shell one-particle data ψ_k(ω, n̂) on mass slices p² = m_k², p⃗ = ω n̂."""

    def __init__(self, omega, radial_weights, grid: SphereGrid, masses, mass_weights, samples,
                 lam: float = 1.0, name: str = 'psi'):
        masses = np.asarray(masses, dtype=float)
        samples = np.asarray(samples, dtype=complex)
        if masses[0] != 0.0:
            raise InvalidInputError('slice 0 of a mass-spread grid must be the lightcone sheet')
        if samples.shape != (masses.size, len(omega), grid.size):
            raise InvalidInputError(f"samples of shape {samples.shape} do not fit the "
                                    f"({masses.size}, {len(omega)}, {grid.size}) grid")
        self.omega = np.asarray(omega, dtype=float)
        self.radial_weights = np.asarray(radial_weights, dtype=float)
        self.grid = grid
        self.masses = masses
        self.mass_weights = np.asarray(mass_weights, dtype=float)
        self.samples = samples
        self.lam = float(lam)
        self.name = name

    @classmethod
    def sample(cls, func, lam: float = 1.0, support: Tuple[float, float] = (0.0, np.inf),
               m_max: float = None, slices: int = MASS_SLICES, omega_max: float = None,
               n_theta: int = 16, nodes: int = RADIAL_NODES, name: str = 'psi') -> 'MassSpreadWavefunction':
        """ψ_k = func(ω, n̂, m_k) on slices with m_k inside ``support``, zero elsewhere."""
        m_max = 1.0 / lam if m_max is None else m_max
        masses, mass_weights = mass_rule(m_max, slices)
        omega, weights = radial_rule(float(8.0 / lam if omega_max is None else omega_max), nodes)
        grid = _sphere(n_theta)
        lo, hi = support
        samples = np.zeros((masses.size, omega.size, grid.size), dtype=complex)
        for k, m in enumerate(masses):
            if lo <= m <= hi:
                values = func(omega[:, None], grid.nodes[None, :, :], m)
                samples[k] = np.broadcast_to(np.asarray(values, dtype=complex), samples.shape[1:])
        return cls(omega, weights, grid, masses, mass_weights, samples, lam, name)

    @classmethod
    def from_sheet(cls, psi: MomentumWavefunction, m_max: float = None,
                   slices: int = MASS_SLICES) -> 'MassSpreadWavefunction':
        masses, mass_weights = mass_rule(1.0 / psi.lam if m_max is None else m_max, slices)
        samples = np.zeros((masses.size,) + psi.samples.shape, dtype=complex)
        samples[0] = psi.samples
        return cls(psi.omega, psi.radial_weights, psi.grid, masses, mass_weights, samples, psi.lam, psi.name)

    @property
    def p0(self) -> np.ndarray:
        """Energy √(ω² + m²) per (slice, radial node)."""
        return np.hypot(self.omega[None, :], self.masses[:, None])

    @property
    def p_minus(self) -> np.ndarray:
        """p⁻ = p⁰ - |p⃗| = m²/(p⁰ + |p⃗|), exactly zero on the sheet."""
        return self.masses[:, None] ** 2 / (self.p0 + self.omega[None, :])

    @property
    def measure(self) -> np.ndarray:
        radial = self.omega ** 2 * self.radial_weights / (2.0 * self.p0)
        return (self.mass_weights[:, None, None] * radial[:, :, None]
                * self.grid.weights[None, None, :] / (2.0 * np.pi) ** 3)

    def dot(self, other: 'MassSpreadWavefunction') -> complex:
        return complex(np.sum(self.measure * np.conj(self.samples) * other.samples))

    def norm_sq(self) -> float:
        return float(self.dot(self).real)

    def norm(self) -> float:
        return float(np.sqrt(max(self.norm_sq(), 0.0)))

    def off_shell_norm(self) -> float:
        """Norm of the slices with m > 0."""
        density = self.measure[1:] * np.abs(self.samples[1:]) ** 2
        return float(np.sqrt(np.sum(density)))

    def sheet(self) -> MomentumWavefunction:
        return MomentumWavefunction(self.omega, self.radial_weights, self.grid, self.samples[0],
                                    self.lam, None, f"{self.name}|sheet")

    def with_samples(self, samples, name: str = None) -> 'MassSpreadWavefunction':
        return MassSpreadWavefunction(self.omega, self.radial_weights, self.grid, self.masses,
                                      self.mass_weights, samples, self.lam, name or self.name)

    def same_grid(self, other: 'MassSpreadWavefunction') -> bool:
        return (self.samples.shape == other.samples.shape
                and np.array_equal(self.masses, other.masses)
                and np.array_equal(self.omega, other.omega)
                and np.array_equal(self.grid.nodes, other.grid.nodes))

    def _check(self, other: 'MassSpreadWavefunction'):
        if not self.same_grid(other):
            raise InvalidInputError(f"{self.name} and {other.name} live on different mass-spread grids")

    def __add__(self, other: 'MassSpreadWavefunction') -> 'MassSpreadWavefunction':
        self._check(other)
        return self.with_samples(self.samples + other.samples, f"{self.name}+{other.name}")

    def __sub__(self, other: 'MassSpreadWavefunction') -> 'MassSpreadWavefunction':
        self._check(other)
        return self.with_samples(self.samples - other.samples, f"{self.name}-{other.name}")

    def __mul__(self, scalar) -> 'MassSpreadWavefunction':
        return self.with_samples(complex(scalar) * self.samples)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return (f"MassSpreadWavefunction({self.name!r}, slices={self.masses.size}, "
                f"radial={self.omega.size}, directions={self.grid.size})")


class TwoParticleFunction:
    """Σ_k c_k a*(A_k) a*(B_k)Ω, with wavefunction Ψ = Σ_k c_k (A_k⊗B_k + B_k⊗A_k)."""

    def __init__(self, terms: Sequence[Tuple[complex, MomentumWavefunction, MomentumWavefunction]]):
        terms = [(complex(c), a, b) for c, a, b in terms]
        if not terms:
            raise InvalidInputError('a two-particle function needs at least one term')
        reference = terms[0][1]
        for _, a, b in terms:
            for psi in (a, b):
                if not reference.same_grid(psi):
                    raise InvalidInputError('two-particle factors live on different momentum grids')
        self.terms: List[Tuple[complex, MomentumWavefunction, MomentumWavefunction]] = terms

    @classmethod
    def product(cls, a: MomentumWavefunction, b: MomentumWavefunction, coef: complex = 1.0) -> 'TwoParticleFunction':
        return cls([(coef, a, b)])

    @property
    def reference(self) -> MomentumWavefunction:
        return self.terms[0][1]

    def dense(self) -> np.ndarray:
        """Ψ(p₁, p₂) over the flattened product grid."""
        size = self.reference.samples.size
        if size > DENSE_LIMIT:
            raise InvalidInputError(f"dense two-particle samples need a grid of at most {DENSE_LIMIT} "
                                    f"nodes, this one has {size}")
        total = np.zeros((size, size), dtype=complex)
        for c, a, b in self.terms:
            left, right = a.samples.ravel(), b.samples.ravel()
            total += c * (np.outer(left, right) + np.outer(right, left))
        return total

    def symmetry_defect(self) -> float:
        values = self.dense()
        return float(np.max(np.abs(values - values.T)))

    def dense_norm_sq(self) -> float:
        """½∫|Ψ|² by quadrature on the product grid."""
        weights = self.reference.measure.ravel()
        return float(0.5 * np.sum(weights[:, None] * weights[None, :] * np.abs(self.dense()) ** 2))

    def inner(self, other: 'TwoParticleFunction') -> complex:
        """Pairwise contractions: Σ c̄_k d_m [(A_k, C_m)(B_k, D_m) + (A_k, D_m)(B_k, C_m)]."""
        total = 0.0 + 0.0j
        for c, a, b in self.terms:
            for d, x, y in other.terms:
                total += np.conj(c) * d * (a.dot(x) * b.dot(y) + a.dot(y) * b.dot(x))
        return complex(total)

    def norm_sq(self) -> float:
        return float(self.inner(self).real)

    def __add__(self, other: 'TwoParticleFunction') -> 'TwoParticleFunction':
        return TwoParticleFunction(self.terms + other.terms)

    def __mul__(self, scalar) -> 'TwoParticleFunction':
        return TwoParticleFunction([(complex(scalar) * c, a, b) for c, a, b in self.terms])

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"TwoParticleFunction(terms={len(self.terms)}, grid={self.reference.samples.shape})"
