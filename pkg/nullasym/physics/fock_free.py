"""The free massless field in its Fock representation, truncated at two particles.

Scalar products of one-particle vectors, the spectral projections E_μ on
two-particle states, the spectral condition of Weyl operators, the one-
operator asymptotic vectors B'⁺_R[f]Ω on off-shell data and the vacuum
coefficient of two-operator products.
"""
from dataclasses import dataclass, field
import logging
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from scipy import special

from nullasym.exceptions import InvalidInputError
from nullasym.models.profiles import (
    GaussShape,
    GKernel,
    HKernel,
    NullProfile,
    ScaledKernel,
    SeparableProfile,
    constant_angular,
    s_derivative,
    scaled_g,
)
from nullasym.models.wavefunction import (
    RADIAL_NODES,
    TAIL_TOLERANCE,
    MassSpreadWavefunction,
    MomentumWavefunction,
    TwoParticleFunction,
)
from nullasym.utils.extrapolation import extrapolate_in_r, scaling_exponent
from nullasym.utils.parallel import map_ordered
from nullasym.utils.quadrature import composite_gauss_legendre

logger = logging.getLogger(__name__)

L_MAX = 8
BAND_TOLERANCE = 1e-8
EPS_CUT = 2.0
MAX_PARTICLES = 2

Wavefunction = Union[MomentumWavefunction, MassSpreadWavefunction]


# --- one-particle space --------------------------------------------------------------------------


def gaussian_wavefunction(sigma: float = 1.0, amplitude: complex = 1.0, angular=None, n_theta: int = 16,
                          nodes: int = RADIAL_NODES, name: str = 'gauss') -> MomentumWavefunction:
    """Ĵ(p) = A·exp(-|p⃗|²/σ²)·a(n̂) on the sheet, with λ = 1/σ."""
    if sigma <= 0:
        raise InvalidInputError(f"σ must be positive, got {sigma}")
    angular = constant_angular(1.0) if angular is None else angular

    def func(omega, n):
        return amplitude * np.exp(-(omega / sigma) ** 2) * angular(n)
    return MomentumWavefunction.sample(func, lam=1.0 / sigma, n_theta=n_theta, nodes=nodes, name=name)


def gaussian_mass_spread(sigma: float = 1.0, support=(0.0, np.inf), amplitude: complex = 1.0,
                         n_theta: int = 16, nodes: int = RADIAL_NODES, name: str = 'gauss') -> MassSpreadWavefunction:
    """exp(-|p⃗|²/σ²) on every mass slice inside ``support``."""
    def func(omega, n, m):
        return amplitude * np.exp(-(omega / sigma) ** 2) * np.ones(n.shape[:-1])
    return MassSpreadWavefunction.sample(func, lam=1.0 / sigma, support=support, n_theta=n_theta,
                                         nodes=nodes, name=name)


def _report_tail(psi: MomentumWavefunction) -> float:
    fraction = psi.tail_fraction()
    if fraction > TAIL_TOLERANCE:
        logger.warning('%s: %.2e of the norm lies above ω = %g; raise ω_max',
                       psi.name, fraction, 0.5 * psi.omega_max)
    return fraction


def inner_product(j1: MomentumWavefunction, j2: MomentumWavefunction) -> complex:
    """(J₁, J₂) = (2π)⁻³∫ conj(Ĵ₁)Ĵ₂ d³p/(2|p⃗|)."""
    if not j1.same_grid(j2):
        raise InvalidInputError(f"{j1.name} and {j2.name} live on different momentum grids")
    for psi in (j1, j2):
        _report_tail(psi)
    return j1.dot(j2)


def _jj(J) -> float:
    if isinstance(J, MomentumWavefunction):
        return float(inner_product(J, J).real)
    value = float(J)
    if value < 0:
        raise InvalidInputError(f"(J, J) must be non-negative, got {value}")
    return value


# --- spectral projections --------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralWindow:
    """E_μ: four-momenta with 0 ≤ p² ≤ μ², p⁰ ≥ 0. μ = 0 is the massless sheet E₀."""

    mu: float

    def __post_init__(self):
        if not self.mu >= 0:
            raise InvalidInputError(f"μ must be non-negative, got {self.mu}")

    def contains(self, p, tol: float = 1e-12) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        p0 = p[..., 0]
        square = p0 ** 2 - np.sum(p[..., 1:] ** 2, axis=-1)
        slack = tol * np.maximum(p0 ** 2, 1.0)
        return (p0 >= 0) & (square >= -slack) & (square <= self.mu ** 2 + slack)

    def pair_mask(self, omega1, omega2, eta) -> np.ndarray:
        """Whether two sheet momenta with p₁·p₂ = 2ω₁ω₂η have total momentum inside the window."""
        return 4.0 * np.asarray(omega1) * np.asarray(omega2) * np.asarray(eta) <= self.mu ** 2

    def project(self, psi: MassSpreadWavefunction) -> MassSpreadWavefunction:
        keep = (psi.masses <= self.mu).astype(float)
        return psi.with_samples(psi.samples * keep[:, None, None], f"E[{self.mu:g}]{psi.name}")


def cap_coefficients(x, l_max: int) -> np.ndarray:
    """c_l(x) = 2π∫_{1-2x}^1 P_l(u) du for l = 0..l_max: the Legendre weights of a cap η ≤ x."""
    x = np.asarray(x, dtype=float)
    u = 1.0 - 2.0 * x
    out = [4.0 * np.pi * x]
    for l in range(1, l_max + 1):
        out.append(-2.0 * np.pi * (special.eval_legendre(l + 1, u) - special.eval_legendre(l - 1, u)) / (2 * l + 1))
    return np.stack(out)


class TwoParticleSpectrum:
    """The μ-independent parts of ‖E_μ a*(J)²Ω‖².

    With η = p₁·p₂/(2ω₁ω₂) the constraint 2p₁·p₂ ≤ μ² is a cap η ≤ μ²/(4ω₁ω₂)
    around n̂₁. The angular integral over the cap is expanded in Legendre
    moments G_l(ω₁, ω₂) of |Ĵ|², which is exact for band-limited angular data.
    """

    def __init__(self, J: MomentumWavefunction, l_max: int = L_MAX, threads: int = None):
        if int(l_max) != l_max or l_max < 0:
            raise InvalidInputError(f"Legendre order must be a non-negative integer, got {l_max}")
        self.l_max = int(l_max)
        self.name = J.name
        _report_tail(J)
        grid = J.grid
        gram = np.clip(grid.nodes @ grid.nodes.T, -1.0, 1.0)
        density = np.abs(J.samples) ** 2 * grid.weights[None, :]

        def moment(l):
            kernel = (2 * l + 1) / (4.0 * np.pi) * special.eval_legendre(l, gram)
            return density @ kernel @ density.T
        self.moments = np.array(map_ordered(moment, range(self.l_max + 1), threads))
        self.omega = J.omega
        self.radial = 0.5 * J.omega * J.radial_weights
        peak = float(np.max(np.abs(self.moments[0])))
        self.band_tail = float(np.max(np.abs(self.moments[-1]))) / peak if peak > 0 and self.l_max > 0 else 0.0
        if self.band_tail > BAND_TOLERANCE:
            logger.warning('%s: Legendre moment %d still carries %.2e of the leading one; '
                           'the cap expansion is truncated', self.name, self.l_max, self.band_tail)

    def norm_sq(self, mu: float) -> float:
        """2(2π)⁻⁶∫_{2p₁·p₂≤μ²}|Ĵ(p₁)|²|Ĵ(p₂)|² d³p₁/(2|p⃗₁|) d³p₂/(2|p⃗₂|)."""
        if not mu >= 0:
            raise InvalidInputError(f"μ must be non-negative, got {mu}")
        if mu == 0:
            return 0.0
        with np.errstate(over='ignore'):
            x = np.minimum(1.0, mu ** 2 / (4.0 * np.outer(self.omega, self.omega)))
        angular = np.sum(cap_coefficients(x, self.l_max) * self.moments, axis=0)
        return float(2.0 * (self.radial @ angular @ self.radial) / (2.0 * np.pi) ** 6)


def two_particle_norm_sq(J: MomentumWavefunction, mu: float, l_max: int = L_MAX) -> float:
    """‖E_μ a*(J)²Ω‖²."""
    return TwoParticleSpectrum(J, l_max).norm_sq(mu)


@dataclass
class SpectralSlope:
    mu: List[float]
    values: List[float]
    exponent: float


def two_particle_scaling(J: MomentumWavefunction, mu_values: Sequence[float], l_max: int = L_MAX) -> SpectralSlope:
    """‖E_μ a*(J)²Ω‖² over μ with its log-log slope."""
    spectrum = TwoParticleSpectrum(J, l_max)
    values = [spectrum.norm_sq(mu) for mu in mu_values]
    return SpectralSlope(list(map(float, mu_values)), values, scaling_exponent(mu_values, values))


# --- Weyl operators ----------------------------------------------------------------------------------


def weyl_vacuum_coefficient(J) -> float:
    """exp(-(J, J)/2), the vacuum component of W(J)Ω."""
    return float(np.exp(-0.5 * _jj(J)))


def phi_series_bound(J, terms: int = 400) -> float:
    """Σ_n ‖a*(J)ⁿP₂‖/(n+2)! with ‖a*(J)ⁿP₂‖² = ((n+2)!/2)(J, J)ⁿ, bounding ‖φ(a*(J))P₂‖."""
    jj = _jj(J)
    if jj == 0.0:
        return 0.5
    n = np.arange(terms)
    logs = -0.5 * special.gammaln(n + 3) - 0.5 * np.log(2.0) + 0.5 * n * np.log(jj)
    return float(np.sum(np.exp(logs)))


def fock_norm(J: MomentumWavefunction, n: int, quadrature: bool = False) -> float:
    """‖a*(J)ⁿΩ‖² = n!(J, J)ⁿ; with ``quadrature`` the n = 2 value comes from the two-particle integral."""
    if n not in range(MAX_PARTICLES + 1):
        raise InvalidInputError(f"the Fock space is truncated at {MAX_PARTICLES} particles, got n = {n}")
    if quadrature and n == 2:
        return two_particle_norm_sq(J, np.inf)
    return float(special.factorial(n) * _jj(J) ** n)


@dataclass
class SpectralIntegral:
    value: float
    mu_min: float
    eps_cut: float
    chain_constant: float
    mu: np.ndarray = field(repr=False)
    integrand: np.ndarray = field(repr=False)


def spectral_condition_integral(J: MomentumWavefunction, eps_cut: float = EPS_CUT, mu_min: float = 1e-4,
                                l_max: int = L_MAX, spectrum: TwoParticleSpectrum = None) -> SpectralIntegral:
    """∫_{μ_min}^{ε} ‖(E_μ - E₀)W(J)Ω‖ dμ/μ through its bound e^{-(J,J)/2}‖φ(a*(J))P₂‖‖E_μ a*(J)²Ω‖."""
    if not mu_min > 0:
        raise InvalidInputError(f"μ_min must be positive, got {mu_min}")
    if eps_cut <= mu_min:
        raise InvalidInputError(f"cut-off ε = {eps_cut} must exceed μ_min = {mu_min}")
    spectrum = TwoParticleSpectrum(J, l_max) if spectrum is None else spectrum
    jj = _jj(J)
    chain = weyl_vacuum_coefficient(jj) * phi_series_bound(jj)
    panels = max(1, int(np.ceil(np.log(eps_cut / mu_min))))
    t, w = composite_gauss_legendre(np.linspace(np.log(mu_min), np.log(eps_cut), panels + 1), 8)
    mu = np.exp(t)
    integrand = chain * np.sqrt(np.maximum([spectrum.norm_sq(m) for m in mu], 0.0))
    return SpectralIntegral(float(w @ integrand), float(mu_min), float(eps_cut), chain, mu, integrand)


@dataclass
class SpectralScan:
    results: List[SpectralIntegral]
    spread: float

    @property
    def values(self) -> List[float]:
        return [r.value for r in self.results]


def spectral_condition_scan(J: MomentumWavefunction, mu_mins: Sequence[float] = (1e-2, 1e-3, 1e-4),
                            eps_cut: float = EPS_CUT, l_max: int = L_MAX) -> SpectralScan:
    """The spectral-condition integral as μ_min decreases, with the relative spread against the last."""
    spectrum = TwoParticleSpectrum(J, l_max)
    results = [spectral_condition_integral(J, eps_cut, m, l_max, spectrum) for m in mu_mins]
    last = results[-1].value
    spread = 0.0 if last == 0 else max(abs(r.value - last) for r in results) / abs(last)
    return SpectralScan(results, float(spread))


# --- truncated Fock space --------------------------------------------------------------------------------


@dataclass
class FockVector:
    """Vacuum, one- and two-particle components; creation beyond two particles is refused."""

    vacuum: complex = 0j
    one: Optional[MomentumWavefunction] = None
    two: Optional[TwoParticleFunction] = None

    @classmethod
    def vacuum_state(cls) -> 'FockVector':
        return cls(1.0 + 0j)

    def create(self, J: MomentumWavefunction) -> 'FockVector':
        if self.two is not None:
            raise InvalidInputError(f"the Fock space is truncated at {MAX_PARTICLES} particles")
        one = J * self.vacuum if self.vacuum != 0 else None
        two = TwoParticleFunction.product(J, self.one) if self.one is not None else None
        return FockVector(0j, one, two)

    def annihilate(self, J: MomentumWavefunction) -> 'FockVector':
        vacuum = inner_product(J, self.one) if self.one is not None else 0j
        one = None
        if self.two is not None:
            for c, a, b in self.two.terms:
                part = (c * inner_product(J, a)) * b + (c * inner_product(J, b)) * a
                one = part if one is None else one + part
        return FockVector(vacuum, one, None)

    def inner(self, other: 'FockVector') -> complex:
        total = np.conj(self.vacuum) * other.vacuum
        if self.one is not None and other.one is not None:
            total += inner_product(self.one, other.one)
        if self.two is not None and other.two is not None:
            total += self.two.inner(other.two)
        return complex(total)


def fock_state(wavefunctions: Sequence[MomentumWavefunction]) -> FockVector:
    """a*(J₁)…a*(J_n)Ω for n ≤ 2."""
    state = FockVector.vacuum_state()
    for J in reversed(list(wavefunctions)):
        state = state.create(J)
    return state


def fock_overlap(left: Sequence[MomentumWavefunction], right: Sequence[MomentumWavefunction]) -> complex:
    """(a*(J₁)…Ω, a*(K₁)…Ω) by pairwise contraction."""
    return fock_state(left).inner(fock_state(right))


def wick_overlap(phi1: MomentumWavefunction, phi2: MomentumWavefunction) -> complex:
    """Vacuum coefficient of a(Φ₁)a*(Φ₂)Ω."""
    return fock_state([phi2]).annihilate(phi1).vacuum


# --- one-operator asymptotic vectors --------------------------------------------------------------------


def third_derivative_smearing(lam: float = 1.0, angular=None) -> NullProfile:
    """f = ∂_s³b for the Gaussian b(s, n̂) = exp(-s²/2λ²)a(n̂) of degree 1."""
    b = SeparableProfile(GaussShape(), angular, lam=lam, eps=3.0, degree=1, name='gauss_b')
    return s_derivative(b, 3)


def _check_smearing(f: NullProfile):
    if f.eps <= 2:
        raise InvalidInputError(f"{f.name}: asymptotic vectors need ε > 2, got {f.eps}")
    if f.degree != -2:
        raise InvalidInputError(f"{f.name}: asymptotic vectors need f = b''' of degree -2, got degree {f.degree}")


def sheet_multiplier(f: NullProfile, energy, n) -> np.ndarray:
    """f̃(1, p⁰p̂⁺) = f̃(p⁰, n̂)/p⁰ for p⁰ > 0."""
    energy = np.asarray(energy, dtype=float)
    return f.transform(energy, n) / energy


def _sheet(psi: Wavefunction) -> MomentumWavefunction:
    return psi.sheet() if isinstance(psi, MassSpreadWavefunction) else psi


def one_particle_vector(psi: Wavefunction, f: NullProfile) -> MomentumWavefunction:
    """2πi f̃(1, P)E₀ψ."""
    _check_smearing(f)
    sheet = _sheet(psi)
    factor = sheet_multiplier(f, sheet.omega[:, None], sheet.grid.nodes[None, :, :])
    return sheet.multiply(2j * np.pi * factor, f"2πi f̃ {sheet.name}")


def asymptotic_one_particle(psi: MassSpreadWavefunction, f: NullProfile, g: GKernel = None, R: float = 100.0,
                            eta: float = 1.0) -> MassSpreadWavefunction:
    """B'⁺_R[f]Ω = i(2π)² g̃_R(P⁻) f̃(1, P⁰P̂⁺)ψ; η < 1 uses the family g^η_R."""
    if not isinstance(psi, MassSpreadWavefunction):
        raise InvalidInputError('the one-operator vector needs off-shell data: without mass slices '
                                'g̃(RP⁻) is identically 1/2π; lift the wavefunction with '
                                'MassSpreadWavefunction.from_sheet or sample it on mass slices')
    _check_smearing(f)
    g = GKernel() if g is None else g
    kernel = scaled_g(g, R, eta, f.lam)
    factor = 1j * (2.0 * np.pi) ** 2 * kernel.transform(psi.p_minus)
    multiplier = sheet_multiplier(f, psi.p0[:, :, None], psi.grid.nodes[None, None, :, :])
    return psi.with_samples(psi.samples * factor[:, :, None] * multiplier, f"B'[R={R:g}]{psi.name}")


def lightcone_limit(psi: MassSpreadWavefunction, f: NullProfile) -> MassSpreadWavefunction:
    """2πi E₀ f̃(1, P)ψ on the mass-spread grid: only the sheet slice survives."""
    samples = np.zeros_like(psi.samples)
    samples[0] = one_particle_vector(psi, f).samples
    return psi.with_samples(samples, f"lim {psi.name}")


def _distance(a: MassSpreadWavefunction, b: MassSpreadWavefunction) -> float:
    return (a - b).norm()


@dataclass
class LimitScan:
    eta: float
    R: List[float]
    distances: List[float]
    off_shell: List[float]
    exponent: float
    final: MassSpreadWavefunction = field(repr=False)


def one_particle_scan(psi: MassSpreadWavefunction, f: NullProfile, R_list: Sequence[float], g: GKernel = None,
                      eta: float = 1.0) -> LimitScan:
    """B'⁺_R[f]Ω over R: distance to the sheet limit and the decay of the off-shell part."""
    if len(R_list) == 0:
        raise InvalidInputError('need at least one R')
    limit = lightcone_limit(psi, f)
    distances, off_shell, final = [], [], None
    for R in R_list:
        final = asymptotic_one_particle(psi, f, g, R, eta)
        distances.append(_distance(final, limit))
        off_shell.append(final.off_shell_norm())
    exponent = scaling_exponent(R_list, off_shell) if len(R_list) > 1 else float('nan')
    return LimitScan(float(eta), list(map(float, R_list)), distances, off_shell, exponent, final)


@dataclass
class EtaFamilyReport:
    scans: Dict[float, LimitScan]
    limit_norm: float
    agreement: float
    passed: Dict[float, bool]


def eta_family_limit(psi: MassSpreadWavefunction, f: NullProfile, g: GKernel = None,
                     etas: Sequence[float] = (0.25, 0.5, 1.0), R_list: Sequence[float] = (1e2, 1e3),
                     tol: float = 1e-5) -> EtaFamilyReport:
    """The one-operator limit along g^η_R for several η; ``agreement`` is the largest relative
    distance between the largest-R vectors of two η values."""
    for eta in etas:
        if not 0 < eta <= 1:
            raise InvalidInputError(f"η must lie in (0, 1], got {eta}")
    limit_norm = lightcone_limit(psi, f).norm()
    scale = limit_norm if limit_norm > 0 else 1.0
    scans = {float(eta): one_particle_scan(psi, f, R_list, g, eta) for eta in etas}
    finals = [scan.final for scan in scans.values()]
    agreement = 0.0
    for i, a in enumerate(finals):
        for b in finals[i + 1:]:
            agreement = max(agreement, _distance(a, b) / scale)
    passed = {eta: scan.distances[-1] <= tol * scale for eta, scan in scans.items()}
    failing = [eta for eta, ok in passed.items() if not ok]
    if failing:
        logger.warning('η-family limit not reached at R = %g for η in %s', R_list[-1], failing)
    return EtaFamilyReport(scans, float(limit_norm), float(agreement), passed)


def vacuum_annihilation(psi: Wavefunction) -> Wavefunction:
    """B⁺[f]*Ω: energy transfer p⁰ ≤ 0 leaves only p = 0, which carries no one-particle weight."""
    if isinstance(psi, MassSpreadWavefunction):
        energy = psi.p0[:, :, None]
    else:
        energy = psi.omega[:, None]
    return psi.with_samples(psi.samples * np.heaviside(-energy, 0.0), f"B*{psi.name}")


# --- scattering overlaps ----------------------------------------------------------------------------------


def scattering_overlap(psi1: Wavefunction, f1: NullProfile, psi2: Wavefunction, f2: NullProfile) -> complex:
    """lim (B₁Ω-part, B₂Ω-part) = (2π)²(f̃₁(1, P)ψ₁, E₀f̃₂(1, P)ψ₂)."""
    for f in (f1, f2):
        _check_smearing(f)
    s1, s2 = _sheet(psi1), _sheet(psi2)
    v1 = s1.multiply(sheet_multiplier(f1, s1.omega[:, None], s1.grid.nodes[None, :, :]))
    v2 = s2.multiply(sheet_multiplier(f2, s2.omega[:, None], s2.grid.nodes[None, :, :]))
    return complex((2.0 * np.pi) ** 2 * inner_product(v1, v2))


def scattering_wick_oracle(psi1: Wavefunction, f1: NullProfile, psi2: Wavefunction, f2: NullProfile) -> complex:
    """The same overlap from a(Φ₁)a*(Φ₂)Ω with Φ_j = 2πi f̃_j(1, P)ψ_j."""
    return wick_overlap(one_particle_vector(psi1, f1), one_particle_vector(psi2, f2))


@dataclass
class ScatteringLimit:
    R: List[float]
    overlaps: List[complex]
    limit: complex
    table: List[dict] = field(default_factory=list)


def scattering_limit_oracle(psi1: MassSpreadWavefunction, f1: NullProfile, psi2: MassSpreadWavefunction,
                            f2: NullProfile, R_list: Sequence[float] = (1e3, 1e4, 1e5),
                            g: GKernel = None) -> ScatteringLimit:
    """(B'⁺_R[f₁]Ω, B'⁺_R[f₂]Ω) on off-shell data, extrapolated to R = ∞.

    Massive slices fade with g̃_R(P⁻); the sheet keeps g̃_R(0) = 1/2π, so the limit
    is the sheet overlap of ``scattering_overlap``.
    """
    for psi in (psi1, psi2):
        if not isinstance(psi, MassSpreadWavefunction):
            raise InvalidInputError('the R-limit oracle needs off-shell data on a mass-spread grid')
    if not psi1.same_grid(psi2):
        raise InvalidInputError(f"{psi1.name} and {psi2.name} live on different mass-spread grids")
    R = sorted(float(value) for value in R_list)
    if len(R) < 2:
        raise InvalidInputError('the R-limit oracle needs at least two radii')
    overlaps = [asymptotic_one_particle(psi1, f1, g, value).dot(asymptotic_one_particle(psi2, f2, g, value))
                for value in R]
    fit = extrapolate_in_r(R, overlaps)
    return ScatteringLimit(R, overlaps, fit.limit, fit.table)


# --- R-derivative of the smearing kernel ------------------------------------------------------------------


def derivative_kernel_identity(g: GKernel, R: float, step: float = 1e-3, r=None) -> float:
    """max_r |∂_R g_R(r) - R⁻¹h_R(r)| with h = -g - r g', the R-derivative taken by central differences."""
    if R <= 0:
        raise InvalidInputError(f"R must be positive, got {R}")
    if not 0 < step < R:
        raise InvalidInputError(f"difference step must lie in (0, R), got {step}")
    if r is None:
        lo, hi = g.support
        r = np.linspace(0.9 * lo * R, 1.1 * hi * R, 801)
    r = np.asarray(r, dtype=float)
    forward = ScaledKernel(g, R + step)(r)
    backward = ScaledKernel(g, R - step)(r)
    numeric = (forward - backward) / (2.0 * step)
    exact = -HKernel(g, R)(r) / R
    return float(np.max(np.abs(numeric - exact)))


@dataclass
class DerivativeScan:
    steps: List[float]
    residuals: List[float]
    order: float


def derivative_kernel_scan(g: GKernel, R: float, steps: Sequence[float] = (0.4, 0.2, 0.1)) -> DerivativeScan:
    """Residual of the R-derivative identity over difference steps; ``order`` is its log-log slope."""
    residuals = [derivative_kernel_identity(g, R, h) for h in steps]
    return DerivativeScan(list(map(float, steps)), residuals, scaling_exponent(steps, residuals))
