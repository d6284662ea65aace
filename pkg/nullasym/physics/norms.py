"""Mixed L^{p,1} norms, the commutator decay profile D_κ and the bounding integrals.

‖ρ‖_{p,1} = ∫ ‖ρ(x⁰, ·)‖_p dx⁰ on sampled grids, with the Hölder and Young
inequalities it satisfies; the two-time tail lemma; and the integral of D_κ
against |f f| that controls ‖B[r, f]‖² as r grows.
"""
from dataclasses import dataclass, field
import logging
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import fft as sfft

from nullasym.exceptions import InvalidInputError
from nullasym.models.geometry import FourVector, SphereGrid
from nullasym.models.grid_function import GridFunction4
from nullasym.models.profiles import NullProfile, SeparableProfile, separable_parts
from nullasym.physics.smearing import angular_correlation
from nullasym.utils.extrapolation import scaling_exponent
from nullasym.utils.parallel import map_ordered
from nullasym.utils.quadrature import composite_gauss_legendre, graded_breaks, real_line_rule

logger = logging.getLogger(__name__)

BOUNDARY_TOLERANCE = 1e-8
SUPPORT_THRESHOLD = 1e-14
EXPONENT_TOLERANCE = 1e-12
YOUNG_EXPONENTS = ((2.0, 2.0, 1.0), (1.5, 1.0, 1.5), (1.0, 1.0, 1.0))
REGIMES = ('sub2', 'super2', 'disjoint')


def _check_exponent(p: float, what: str = 'p'):
    if not np.isfinite(p) or p < 1:
        raise InvalidInputError(f"{what} must be a finite exponent ≥ 1, got {p}")


def conjugate_exponent(p: float) -> float:
    return np.inf if p == 1 else p / (p - 1.0)


def _p_norm(values: np.ndarray, weight: float, p: float) -> float:
    magnitude = np.abs(values)
    if np.isinf(p):
        return float(np.max(magnitude)) if magnitude.size else 0.0
    return float((weight * np.sum(magnitude ** p)) ** (1.0 / p))


# --- L^{p,1} ---------------------------------------------------------------------------------


def slice_norms(rho: GridFunction4, p: float, threads: int = None) -> np.ndarray:
    """‖ρ(x⁰, ·)‖_p for every x⁰ slice."""
    volume = rho.spatial_volume
    return np.array(map_ordered(lambda i: _p_norm(rho.samples[i], volume, p), range(rho.shape[0]), threads))


@dataclass
class Lp1Result:
    value: float
    boundary_fraction: float
    truncation: Optional[float] = None
    reported: bool = False


def _envelope_tail(rho: GridFunction4, p: float) -> float:
    """‖E·1_outside‖_{p,1} on the box tripled in every direction, sampled coarsely."""
    span = rho.upper - rho.lower
    lower, upper = rho.lower - span, rho.upper + span
    inner_lo, inner_hi = rho.lower, rho.upper

    def outside(x):
        inside = np.all((x >= inner_lo) & (x <= inner_hi), axis=-1)
        return np.where(inside, 0.0, rho.envelope(x))

    shell = GridFunction4.sample(outside, lower, upper, rho.shape, name=f"{rho.name}-tail")
    return float(np.sum(slice_norms(shell, p)) * shell.spacing[0])


def lp1_details(rho: GridFunction4, p: float, threads: int = None) -> Lp1Result:
    _check_exponent(p)
    value = float(np.sum(slice_norms(rho, p, threads)) * rho.spacing[0])
    fraction = rho.boundary_fraction()
    if rho.envelope is not None:
        return Lp1Result(value, fraction, _envelope_tail(rho, p))
    reported = fraction > BOUNDARY_TOLERANCE
    if reported:
        logger.warning('%s: no envelope and boundary samples reach %.2e of the peak; '
                       'the L^{%g,1} norm may be truncated', rho.name, fraction, p)
    return Lp1Result(value, fraction, None, reported)


def lp1_norm(rho: GridFunction4, p: float, threads: int = None) -> float:
    """‖ρ‖_{p,1}: per-slice p-norms integrated over x⁰."""
    return lp1_details(rho, p, threads).value


def lp_norm(rho: GridFunction4, p: float) -> float:
    """Plain L^p norm over all four dimensions."""
    _check_exponent(p)
    return _p_norm(rho.samples, rho.cell_volume, p)


def holder_check(h, rho: GridFunction4, p: float, kind: str = 'space') -> Tuple[float, float]:
    """Both sides of ‖h₃ρ‖₁ ≤ ‖h₃‖_q‖ρ‖_{p,1} (kind='space') or ‖h₀ρ‖_{p,1} ≤ ‖h₀‖_q‖ρ‖_p (kind='time')."""
    _check_exponent(p)
    q = conjugate_exponent(p)
    if kind == 'space':
        values = rho.spatial_values(h)
        lhs = float(np.sum(np.abs(values[None, ...] * rho.samples)) * rho.cell_volume)
        rhs = _p_norm(values, rho.spatial_volume, q) * lp1_norm(rho, p)
    elif kind == 'time':
        values = rho.time_values(h)
        lhs = lp1_norm(rho.multiply_time(values), p)
        rhs = _p_norm(values, rho.spacing[0], q) * lp_norm(rho, p)
    else:
        raise InvalidInputError(f"unknown Hölder kind {kind!r}; use 'space' or 'time'")
    return lhs, rhs


# --- convolutions ------------------------------------------------------------------------------


def _support_extent(samples: np.ndarray, axis: int) -> int:
    magnitude = np.abs(samples)
    top = float(np.max(magnitude)) if magnitude.size else 0.0
    if top == 0.0:
        return 0
    others = tuple(k for k in range(samples.ndim) if k != axis)
    occupied = np.flatnonzero(np.max(magnitude, axis=others) > SUPPORT_THRESHOLD * top)
    return int(occupied[-1] - occupied[0] + 1)


def _check_aliasing(arrays: Sequence[np.ndarray], axes: Sequence[int]):
    for samples in arrays:
        for axis in axes:
            extent = _support_extent(samples, axis)
            if 2 * extent > samples.shape[axis]:
                raise InvalidInputError(
                    f"support spans {extent} of {samples.shape[axis]} cells on axis {axis}; "
                    'more than half the periodic box aliases the convolution')


def _fft_convolve(a: np.ndarray, b: np.ndarray, axes: Sequence[int], pad: bool) -> np.ndarray:
    if pad:
        full = [a.shape[k] + b.shape[k] - 1 for k in axes]
        sizes = [sfft.next_fast_len(n) for n in full]
    else:
        if a.shape != b.shape:
            raise InvalidInputError('periodic convolution needs equal grid shapes')
        _check_aliasing([a, b], axes)
        sizes = [a.shape[k] for k in axes]
        full = sizes
    product = sfft.fftn(a, s=sizes, axes=axes) * sfft.fftn(b, s=sizes, axes=axes)
    result = sfft.ifftn(product, s=sizes, axes=axes)
    index = [slice(None)] * result.ndim
    for axis, n in zip(axes, full):
        index[axis] = slice(0, n)
    return result[tuple(index)]


def convolve(phi: GridFunction4, psi: GridFunction4, pad: bool = True) -> GridFunction4:
    """(φ∗ψ)(x) = ∫ φ(x - y) ψ(y) d⁴y by discrete transform.

    With ``pad`` the grids are zero-padded to the full linear convolution;
    without it the convolution is periodic and supports wider than half
    the box are rejected.
    """
    if not phi.compatible(psi):
        raise InvalidInputError('convolution needs equal grid spacings')
    samples = _fft_convolve(phi.samples, psi.samples, (0, 1, 2, 3), pad) * phi.cell_volume
    return GridFunction4(samples, phi.origin + psi.origin, phi.spacing, name=f"{phi.name}*{psi.name}")


def convolve_spatial(phi: GridFunction4, h3: np.ndarray, pad: bool = True) -> GridFunction4:
    """3-space convolution of every x⁰ slice with h₃ sampled on the spatial grid spacing."""
    h3 = np.asarray(h3)
    if h3.ndim != 3:
        raise InvalidInputError(f"spatial factor must be 3-dimensional, got shape {h3.shape}")
    if not pad:
        if h3.shape != phi.shape[1:]:
            raise InvalidInputError('periodic convolution needs the spatial factor on the same grid')
        _check_aliasing([phi.samples, h3[None, ...]], (1, 2, 3))
        product = sfft.fftn(phi.samples, axes=(1, 2, 3)) * sfft.fftn(h3, axes=(0, 1, 2))[None, ...]
        samples = sfft.ifftn(product, axes=(1, 2, 3))
    else:
        samples = _fft_convolve(phi.samples, h3[None, ...], (1, 2, 3), True)
    return GridFunction4(samples * phi.spatial_volume, phi.origin, phi.spacing, name=f"{phi.name}*3h")


def _check_young(p: float, q: float, r: float):
    for value, name in ((p, 'p'), (q, 'q'), (r, 'r')):
        _check_exponent(value, name)
    if abs(1.0 + 1.0 / p - 1.0 / q - 1.0 / r) > EXPONENT_TOLERANCE:
        raise InvalidInputError(f"Young exponents need 1 + 1/p = 1/q + 1/r, got p={p}, q={q}, r={r}")


def young_check(phi: GridFunction4, psi, p: float, q: float, r: float, variant: str = 'full',
                pad: bool = True) -> Tuple[float, float]:
    """(‖φ∗ψ‖_{p,1}, ‖φ‖_{q,1}‖ψ‖_{r,1}).

    ``variant='young13'`` convolves in 3-space only, with ψ a spatial array;
    the right side then uses ‖ψ‖_r over 3-space.
    """
    _check_young(p, q, r)
    if variant == 'full':
        lhs = lp1_norm(convolve(phi, psi, pad), p)
        return lhs, lp1_norm(phi, q) * lp1_norm(psi, r)
    if variant == 'young13':
        h3 = np.asarray(psi)
        lhs = lp1_norm(convolve_spatial(phi, h3, pad), p)
        return lhs, lp1_norm(phi, q) * _p_norm(h3, phi.spatial_volume, r)
    raise InvalidInputError(f"unknown Young variant {variant!r}; use 'full' or 'young13'")


# --- randomized suites ---------------------------------------------------------------------------


def gaussian_mixture(rng: np.random.Generator, dims: int, components: int = 3,
                     spread: float = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    centers = rng.uniform(-spread, spread, size=(components, dims))
    widths = rng.uniform(0.3, 1.0, size=components)
    weights = rng.normal(size=components) + 1j * rng.normal(size=components)

    def mixture(x):
        x = np.asarray(x, dtype=float)
        total = np.zeros(x.shape[:-1], dtype=complex)
        for center, width, weight in zip(centers, widths, weights):
            total += weight * np.exp(-np.sum((x - center) ** 2, axis=-1) / (2.0 * width ** 2))
        return total
    return mixture


@dataclass
class NormCase:
    kind: str
    first: object
    second: object
    exponents: Tuple[float, ...]
    variant: str = 'full'

    def run(self) -> Tuple[float, float]:
        if self.kind.startswith('holder'):
            return holder_check(self.second, self.first, self.exponents[0], self.variant)
        return young_check(self.first, self.second, *self.exponents, variant=self.variant)


CASE_KINDS = ('holder', 'holder_time', 'young', 'young13')


def random_cases(rng: np.random.Generator, n: int, kind: str, cells: int = 10,
                 half_width: float = 2.0) -> List[NormCase]:
    """Randomized Hölder or Young cases on a (cells⁴) grid over [-half_width, half_width]⁴."""
    if kind not in CASE_KINDS:
        raise InvalidInputError(f"unknown case kind {kind!r}; known: {', '.join(CASE_KINDS)}")
    lower, upper, shape = [-half_width] * 4, [half_width] * 4, (cells,) * 4
    spacing = 2.0 * half_width / cells
    spatial = -half_width + spacing * (np.arange(cells) + 0.5)
    mesh = np.stack(np.meshgrid(spatial, spatial, spatial, indexing='ij'), axis=-1)
    cases = []
    for index in range(n):
        rho = GridFunction4.sample(gaussian_mixture(rng, 4), lower, upper, shape, name=f"rho{index}")
        if kind == 'holder':
            p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
            cases.append(NormCase(kind, rho, gaussian_mixture(rng, 3)(mesh), (p,), 'space'))
        elif kind == 'holder_time':
            p = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
            cases.append(NormCase(kind, rho, gaussian_mixture(rng, 1)(spatial[:, None]), (p,), 'time'))
        elif kind == 'young':
            exponents = YOUNG_EXPONENTS[index % len(YOUNG_EXPONENTS)]
            psi = GridFunction4.sample(gaussian_mixture(rng, 4), lower, upper, shape, name=f"psi{index}")
            cases.append(NormCase(kind, rho, psi, exponents))
        else:
            p = float(rng.choice([1.0, 1.5, 2.0]))
            cases.append(NormCase(kind, rho, gaussian_mixture(rng, 3)(mesh), (p, p, 1.0), 'young13'))
    return cases


# --- decay profile --------------------------------------------------------------------------------


@dataclass(frozen=True)
class DecayProfile:
    kappa: float
    lam: float = 1.0

    def __post_init__(self):
        if self.kappa <= 0 or self.lam <= 0:
            raise InvalidInputError(f"decay profile needs κ > 0 and λ > 0, got κ={self.kappa}, λ={self.lam}")

    def __call__(self, a):
        return dkappa(a, self)


def dkappa(a, prof: DecayProfile):
    """D_κ(a): 1 on and inside the light cone, λ^κ/(λ + |a⃗| - |a⁰|)^κ outside."""
    comps = a.components if isinstance(a, FourVector) else np.asarray(a, dtype=float)
    time = np.abs(comps[..., 0])
    space = np.linalg.norm(comps[..., 1:], axis=-1)
    outside = space > time
    gap = np.where(outside, space - time, 0.0)
    value = np.where(outside, (prof.lam / (prof.lam + gap)) ** prof.kappa, 1.0)
    return float(value) if value.ndim == 0 else value


# --- tail lemma -------------------------------------------------------------------------------------


def _uniform_s_grid(lam: float, s_max: float = None, step: float = None) -> np.ndarray:
    s_max = 2000.0 * lam if s_max is None else s_max
    step = 0.05 * lam if step is None else step
    count = int(np.ceil(s_max / step))
    return step * np.arange(-count, count + 1)


def linear_correlation(v1: np.ndarray, v2: np.ndarray, step: float) -> Tuple[np.ndarray, np.ndarray]:
    """C(Δ) = ∫ v₁(s) v₂(s + Δ) ds for samples on a common uniform grid, by padded transform."""
    n = v1.size
    size = sfft.next_fast_len(2 * n - 1)
    product = sfft.fft(v1[::-1], size) * sfft.fft(v2, size)
    values = sfft.ifft(product)[:2 * n - 1] * step
    if np.isrealobj(v1) and np.isrealobj(v2):
        values = values.real
    delta = step * (np.arange(2 * n - 1) - (n - 1))
    return delta, values


def _outer_mass(delta: np.ndarray, values: np.ndarray, S: float, step: float) -> complex:
    distance = np.abs(delta)
    weights = np.where(distance >= S - 1e-9 * step, 1.0, 0.0)
    if S > 0:
        weights = np.where(np.abs(distance - S) < 1e-9 * step, 0.5, weights)
    return np.sum(weights * values) * step


@dataclass
class TailBound:
    S: float
    lhs: float
    ref: float
    constant: float


@dataclass
class TailScan:
    bounds: List[TailBound]
    exponent: float

    @property
    def lhs(self) -> np.ndarray:
        return np.array([b.lhs for b in self.bounds])


def _tail_bounds(f1, f2, S_values, eps: float, lam: float, s_max: float, step: float) -> List[TailBound]:
    s = _uniform_s_grid(lam, s_max, step)
    h = s[1] - s[0]
    delta, values = linear_correlation(np.asarray(f1(s)), np.asarray(f2(s)), h)
    constant = float(abs(_outer_mass(delta, values, 0.0, h))) * lam ** eps
    return [TailBound(float(S), float(abs(_outer_mass(delta, values, S, h))),
                      constant / (lam + S) ** eps, constant) for S in S_values]


def tail_product_bound(f1, f2, S: float, eps: float, lam: float = 1.0, s_max: float = None,
                       step: float = None) -> TailBound:
    """|∬_{|s₁-s₂|≥S} f₁f₂| next to C/(λ + S)^ε, C = λ^ε times the S = 0 value."""
    if eps <= 0:
        raise InvalidInputError(f"tail lemma needs ε > 0, got {eps}")
    return _tail_bounds(f1, f2, [S], eps, lam, s_max, step)[0]


def tail_lemma_scan(f1, f2, S_values: Sequence[float], eps: float, lam: float = 1.0,
                    s_max: float = None, step: float = None) -> TailScan:
    """Tail bounds over several S with the fitted decay exponent of the left side in λ + S."""
    bounds = _tail_bounds(f1, f2, S_values, eps, lam, s_max, step)
    usable = [b for b in bounds if b.S > 0]
    exponent = float('nan')
    if len(usable) >= 2:
        exponent = -scaling_exponent([lam + b.S for b in usable], [b.lhs for b in usable])
    return TailScan(bounds, exponent)


# --- commutator bounding integral ---------------------------------------------------------------------


def _power_integral(m: float, lam: float, Y: np.ndarray) -> np.ndarray:
    """∫_0^{Y-λ} (λ + x)^{-m} dx"""
    if abs(m - 1.0) < 1e-10:
        return np.log(Y / lam)
    return (lam ** (1.0 - m) - Y ** (1.0 - m)) / (m - 1.0)


def radial_kernel(delta, r: float, kappa: float, lam: float = 1.0) -> np.ndarray:
    """J(Δ) = r² ∫₀¹ D_κ(Δ, 2rξ) dξ² in closed form."""
    a = np.abs(np.asarray(delta, dtype=float))
    inside = a < 2.0 * r
    a_in = np.where(inside, a, 0.0)
    Y = lam + 2.0 * r - a_in
    tail = 0.5 * lam ** kappa * (_power_integral(kappa - 1.0, lam, Y)
                                 + (a_in - lam) * _power_integral(kappa, lam, Y))
    return np.where(inside, 0.25 * a_in ** 2 + tail, r * r)


def numeric_kernel(a: float, r: float, kappa: float, lam: float, q_spline, nodes: int = 8) -> Tuple[float, int]:
    """r² ∫₀¹ Q(1 - 2ξ²) D_κ(a, 2rξ) dξ² by panels in ρ = 2rξ; also the node count."""
    a = abs(a)
    near = min(a, 2.0 * r)
    rho, w = composite_gauss_legendre(np.linspace(0.0, near, 33), nodes)
    total = np.sum(w * 0.5 * rho * q_spline(1.0 - rho ** 2 / (2.0 * r * r)))
    count = rho.size
    if a < 2.0 * r:
        span = 2.0 * r - a
        x, wx = composite_gauss_legendre(graded_breaks(0.5 * lam, min(40.0 * lam, span), span), nodes)
        rho = a + x
        decay = (lam / (lam + x)) ** kappa
        total += np.sum(wx * 0.5 * rho * q_spline(1.0 - rho ** 2 / (2.0 * r * r)) * decay)
        count += rho.size
    return float(total), count


@dataclass(frozen=True)
class _AbsAngular:
    func: Callable

    def __call__(self, n):
        return np.abs(self.func(n))


@dataclass
class CommutatorIntegral:
    value: float
    r: float
    kappa: float
    regime: str
    evaluations: int
    closed_form: bool
    partial: bool = False


def _radial_and_angular(f: NullProfile):
    parts = separable_parts(f)
    if parts is None:
        raise InvalidInputError(f"{f.name}: the bounding integral needs a separable profile ρ(s)a(n̂)")
    return parts


def _check_regime(regime: str, kappa: float):
    if regime not in REGIMES:
        raise InvalidInputError(f"unknown regime {regime!r}; known: {', '.join(REGIMES)}")
    if regime == 'sub2' and not kappa < 2:
        raise InvalidInputError(f"regime 'sub2' needs κ < 2, got {kappa}")
    if regime != 'sub2' and not kappa > 2:
        raise InvalidInputError(f"regime {regime!r} needs κ > 2, got {kappa}")


def commutator_integral_report(f: NullProfile, r: float, kappa: float, regime: str = 'super2',
                               f2: NullProfile = None, lam: float = None, budget: int = 10 ** 7,
                               numeric: bool = False, n_theta: int = 32, s_max: float = None,
                               step: float = None) -> CommutatorIntegral:
    """I = ∫ I(s₁, l₁)|f₁(s₁, l₁)| ds₁ dΩ(l₁) at r₁ = r₂ = r for separable f₁, f₂.

    The s-integrals reduce to the correlation C(Δ) of |ρ₁| and |ρ₂|, the
    angular ones to Q(u) = ∫dΩ|a₁| ∫dφ|a₂| on the circle n̂₁·n̂₂ = u, so
    I = ∫ C(Δ) K(Δ) dΔ. For constant angular factors K = Q·J in closed form.
    """
    _check_regime(regime, kappa)
    if r <= 0:
        raise InvalidInputError(f"r must be positive, got {r}")
    if regime == 'disjoint' and f2 is None:
        raise InvalidInputError("regime 'disjoint' needs a second smearing function")
    f2 = f if f2 is None else f2
    for g in (f, f2):
        if g.eps <= 2:
            raise InvalidInputError(f"{g.name}: the bounding integral needs ε > 2, got {g.eps}")
    lam = f.lam if lam is None else lam
    radial1, angular1 = _radial_and_angular(f)
    radial2, angular2 = _radial_and_angular(f2)

    s = _uniform_s_grid(lam, s_max, step)
    h = s[1] - s[0]
    delta, corr = linear_correlation(np.abs(radial1(0)(s)), np.abs(radial2(0)(s)), h)

    isotropic = all(isinstance(g, SeparableProfile) and g.is_isotropic() for g in (f, f2))
    if isotropic and not numeric and regime != 'disjoint':
        pole = np.array([[0.0, 0.0, 1.0]])
        q0 = 8.0 * np.pi ** 2 * float(np.abs(angular1(pole))[0] * np.abs(angular2(pole))[0])
        value = q0 * h * float(np.sum(corr * radial_kernel(delta, r, kappa, lam)))
        return CommutatorIntegral(value, r, kappa, regime, delta.size, True)

    q_spline = angular_correlation(_AbsAngular(angular1), _AbsAngular(angular2), n_theta)
    if regime == 'disjoint':
        peak = float(np.max(np.abs(q_spline(np.linspace(-1.0, 1.0, 257)))))
        if abs(float(q_spline(1.0))) > 1e-12 * max(peak, 1e-300):
            raise InvalidInputError('angular supports of the two smearing functions overlap')

    reach = float(delta[-1])
    breaks = np.union1d(graded_breaks(0.5 * lam, min(40.0 * lam, reach), reach), [min(2.0 * r, reach)])
    nodes = 8
    estimate = (breaks.size - 1) * nodes * (32 + 80 + int(np.log2(max(2.0, 2.0 * r / lam)))) * nodes
    partial = estimate > budget
    if partial:
        nodes = 4
        logger.warning('bounding integral at r = %g: %d evaluations exceed the budget %d; '
                       'using a coarser rule', r, estimate, budget)
    a, wa = composite_gauss_legendre(breaks, nodes)
    weights = wa * (np.interp(a, delta, corr) + np.interp(-a, delta, corr))
    total, evaluations = 0.0, 0
    for ai, wi in zip(a, weights):
        k, count = numeric_kernel(ai, r, kappa, lam, q_spline, nodes)
        total += wi * k
        evaluations += count
    return CommutatorIntegral(float(total), r, kappa, regime, evaluations, False, partial)


def commutator_bound_integral(f: NullProfile, r: float, kappa: float, regime: str = 'super2',
                              f2: NullProfile = None, **options) -> float:
    return commutator_integral_report(f, r, kappa, regime, f2, **options).value


def limit_reference(f: NullProfile, lam: float = None, n_theta: int = 16) -> float:
    """∫ |f(s₁, l) f(s₂, l)| [(s₁ - s₂)² + λ²] ds₁ ds₂ dΩ(l) by direct quadrature."""
    lam = f.lam if lam is None else lam
    s, ws = real_line_rule(f.lam)
    grid = SphereGrid.product(n_theta)
    values = np.abs(np.asarray(f(s[:, None], grid.nodes[None, :, :])))
    moments = [(ws * s ** k) @ values for k in range(3)]
    bracket = 2.0 * moments[0] * moments[2] - 2.0 * moments[1] ** 2 + lam ** 2 * moments[0] ** 2
    return float(grid.weights @ bracket)


@dataclass
class ScalingFit:
    r: List[float]
    values: List[float]
    exponent: float
    mode: str
    reports: List[CommutatorIntegral] = field(default_factory=list)


def commutator_scaling(f: NullProfile, r_values: Sequence[float], kappa: float, regime: str = 'super2',
                       f2: NullProfile = None, threads: int = None, **options) -> ScalingFit:
    """I(r) over r with its log-log exponent: growth of the increments for 'sub2', the values otherwise."""
    reports = map_ordered(lambda r: commutator_integral_report(f, r, kappa, regime, f2, **options),
                          r_values, threads)
    values = [rep.value for rep in reports]
    mode = 'increments' if regime == 'sub2' else 'values'
    exponent = scaling_exponent(r_values, values, mode)
    return ScalingFit(list(r_values), values, exponent, mode, reports)
