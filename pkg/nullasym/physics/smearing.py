"""Smeared asymptote functionals B[r, f] and B[g, f] of classical fields.

B[r, f] = (r/2π)∫ B(st + rl) f(s, l) ds dΩ_t(l) in the gauge t·l = 1 of a
frame t; B[g, f] = ∫ g(r) B[r, f] dr. Fields are either field handles
(evaluated pointwise on the cylinder) or null-data profiles, for which the
sphere integrals are done analytically in the relative angle.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import logging
from typing import List, Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from nullasym.exceptions import InvalidInputError
from nullasym.models.geometry import (
    E0,
    ETA,
    Boost,
    FourVector,
    SphereGrid,
    invariant_sphere_integral,
)
from nullasym.models.profiles import (
    GKernel,
    HKernel,
    NullProfile,
    ScaledKernel,
    extend_homogeneous,
    outgoing,
    scaled_g,
    separable_parts,
)
from nullasym.physics.classical_field import FieldHandle, MomentumProfile
from nullasym.utils.extrapolation import scaling_exponent
from nullasym.utils.parallel import map_ordered
from nullasym.utils.quadrature import (
    composite_gauss_legendre,
    graded_breaks,
    periodic_trapezoid,
    window_rule,
)

logger = logging.getLogger(__name__)

TAIL_TOLERANCE = 1e-6


@dataclass
class SmearKernel:
    """The pair (f, g) with the frame of the cylinder and the scaling of g."""

    f: NullProfile
    g: GKernel = field(default_factory=GKernel)
    frame: Optional[FourVector] = None
    eta: float = 1.0

    def __post_init__(self):
        if self.f.eps <= 2:
            raise InvalidInputError(f"smearing function needs ε > 2, got {self.f.eps}")

    def scaled(self, R: float) -> ScaledKernel:
        return scaled_g(self.g, R, self.eta, self.f.lam)


def _frame_components(frame) -> np.ndarray:
    if frame is None:
        return E0
    if isinstance(frame, FourVector):
        return frame.components
    return np.asarray(frame, dtype=float)


def _s_rule(r: float, width: float, core: float, nodes: int = 8):
    """Window [-2r - core, core] covering the retarded times that reach the cylinder."""
    return window_rule(-2.0 * r - core, core, width, nodes, core)


# --- field-handle path ---------------------------------------------------------------


def _cylinder_sum(integrand, r: float, f: NullProfile, frame, grid: SphereGrid, rule, chunk: int = 256):
    """(r/2π) Σ w_s w_l integrand(st + rl, l)·f(s, l); also the part carried by the tail nodes."""
    s, ws, tail = rule
    t = _frame_components(frame)
    l = grid.lightcone(frame)
    total = 0.0 + 0.0j
    tail_part = 0.0 + 0.0j
    for start in range(0, s.size, chunk):
        block = slice(start, start + chunk)
        sb = s[block]
        x = sb[:, None, None] * t + r * l[None, :, :]
        values = np.asarray(integrand(x, l)) * extend_homogeneous(f, sb[:, None], l[None, :, :])
        per_s = values @ grid.weights
        total += np.sum(ws[block] * per_s)
        tail_part += np.sum((ws[block] * per_s)[tail[block]])
    scale = r / (2.0 * np.pi)
    return scale * total, scale * tail_part


def _check_tail(total, tail_part, what: str):
    if abs(tail_part) > TAIL_TOLERANCE * max(abs(total), 1e-300):
        logger.warning('%s: %.2e of the value comes from the mapped s-tails; widen s_core',
                       what, abs(tail_part) / max(abs(total), 1e-300))


def _field_value(B: FieldHandle):
    def integrand(x, l):
        return B(x)
    return integrand


def _directional(B: FieldHandle):
    """l^a ∂_a B at the cylinder points."""
    def integrand(x, l):
        return np.einsum('...a,...a->...', B.gradient(x), np.broadcast_to(l, x.shape))
    return integrand


# --- null-data path --------------------------------------------------------------------


@lru_cache(maxsize=32)
def angular_correlation(c, a, n_theta: int = 32, n_phi: int = 64, points: int = 257) -> CubicSpline:
    """Q(u) = ∫dΩ(n̂) c(n̂) ∫dφ a(n̂'), n̂' on the circle n̂·n̂' = u; a spline in u."""
    grid = SphereGrid.product(n_theta)
    n = grid.nodes
    reference = np.where(np.abs(n[:, 2:3]) < 0.9, [[0.0, 0.0, 1.0]], [[1.0, 0.0, 0.0]])
    e1 = np.cross(n, reference)
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    e2 = np.cross(n, e1)
    phi, wphi = periodic_trapezoid(n_phi)
    ring = np.cos(phi)[None, :, None] * e1[:, None, :] + np.sin(phi)[None, :, None] * e2[:, None, :]
    weighted_c = grid.weights * np.asarray(c(n))
    u_grid = np.linspace(-1.0, 1.0, points)
    values = np.empty(points, dtype=complex)
    for i, u in enumerate(u_grid):
        n_prime = u * n[:, None, :] + np.sqrt(max(0.0, 1.0 - u * u)) * ring
        values[i] = weighted_c @ (np.asarray(a(n_prime)) @ wphi)
    if np.all(values.imag == 0):
        return CubicSpline(u_grid, values.real)
    return CubicSpline(u_grid, values)


def _correlation(radial_f, radial_bdot, v: np.ndarray, rule, chunk: int = 64) -> np.ndarray:
    """K(v) = ∫ ρ_f(s) ρ̇_b(s + v) ds."""
    s, ws, _ = rule
    weighted = radial_f(s) * ws
    out = np.empty(v.size, dtype=complex)
    for start in range(0, v.size, chunk):
        block = v[start:start + chunk]
        out[start:start + chunk] = radial_bdot(s[None, :] + block[:, None]) @ weighted
    return out


def _null_data_smear(p: NullProfile, r: float, f: NullProfile, n_theta: int, n_phi: int,
                     core: float, nodes: int = 8) -> complex:
    """B[r, f] = -(1/4π²)∫₀^{2r} K(v) Q(1 - v/r) dv for separable data and smearing."""
    b_parts = separable_parts(p)
    f_parts = separable_parts(f)
    if b_parts is None or f_parts is None:
        raise InvalidInputError('null-data smearing needs separable profile and smearing function; '
                                'pass a field handle instead')
    b_radial, b_angular = b_parts
    f_radial, f_angular = f_parts
    width = min(p.lam, f.lam)
    breaks = graded_breaks(0.5 * width, min(40.0 * width, 2.0 * r), 2.0 * r)
    v, wv = composite_gauss_legendre(breaks, nodes)
    k = _correlation(f_radial(0), b_radial(1), v, _s_rule(r, width, core * max(p.lam, f.lam)))
    q = angular_correlation(f_angular, b_angular, n_theta, n_phi)(1.0 - v / r)
    return complex(-np.sum(wv * k * q) / (4.0 * np.pi ** 2))


# --- smearing ------------------------------------------------------------------------------


def smear_r(B, r: float, f: NullProfile, frame=None, n_theta: int = 32, n_phi: int = 64,
            s_core: float = None) -> complex:
    """B[r, f] for a field handle, or for the field of a separable null-data profile."""
    if r <= 0:
        raise InvalidInputError(f"r must be positive, got {r}")
    core = s_core if s_core is not None else 40.0 * f.lam
    if isinstance(B, NullProfile):
        if frame is not None and not np.array_equal(_frame_components(frame), E0):
            raise InvalidInputError('null-data smearing is done in the rest frame; '
                                    'pass a field handle for other frames')
        return _null_data_smear(B, r, f, n_theta, n_phi, core / f.lam)
    grid = SphereGrid.product(n_theta)
    total, tail_part = _cylinder_sum(_field_value(B), r, f, frame, grid, _s_rule(r, f.lam, core))
    _check_tail(total, tail_part, f"B[{r:g}, {f.name}]")
    return complex(total)


def smear_g(B, g, f: NullProfile, nodes: int = 48, threads: int = None, **options) -> complex:
    """B[g, f] = ∫ g(r) B[r, f] dr by Gauss-Legendre on the support of g."""
    r, w = g.quadrature(nodes)
    values = map_ordered(lambda radius: smear_r(B, radius, f, **options), r.tolist(), threads)
    return complex(np.sum(w * g(r) * np.asarray(values)))


def pairing(b_out: NullProfile, f: NullProfile, frame=None, n_theta: int = 32,
            s_core: float = None) -> complex:
    """∫ b_out(s, l) f(s, l) ds d²l over the section t·l = 1 of ``frame``."""
    width = min(b_out.lam, f.lam)
    core = s_core if s_core is not None else 40.0 * max(b_out.lam, f.lam)
    s, ws, _ = window_rule(-core, core, width, 16, core)
    power = b_out.degree + f.degree + 1

    def integrand(l):
        tl = l[:, 0]
        n = l[:, 1:] / tl[:, None]
        values = b_out(s[:, None], n[None, :, :]) * f(s[:, None], n[None, :, :])
        return tl ** power * (ws @ values)

    return complex(invariant_sphere_integral(integrand, SphereGrid.product(n_theta), frame))


def asymptote_functional(p: NullProfile, f: NullProfile, frame=None, n_theta: int = 32) -> complex:
    """lim_{r→∞} B[r, f] = (1/2π)∫ b_out f ds d²l."""
    return pairing(outgoing(p), f, frame, n_theta) / (2.0 * np.pi)


@dataclass
class InvarianceResult:
    value_rest: complex
    value_boosted: complex
    diff: float


def lorentz_invariance_check(p: NullProfile, f: NullProfile, boost: Boost, n_theta: int = 32) -> InvarianceResult:
    """The asymptote functional in the rest frame and in the boosted frame Λe₀."""
    if f.degree != -2:
        raise InvalidInputError(f"smearing function must be homogeneous of degree -2, got {f.degree}")
    rest = asymptote_functional(p, f, None, n_theta)
    boosted = asymptote_functional(p, f, boost.frame(), n_theta)
    return InvarianceResult(rest, boosted, float(abs(boosted - rest)))


def deriv_identity_residual(B: FieldHandle, r: float, f: NullProfile, h: float = 1e-2,
                            n_theta: int = 32, s_core: float = None) -> float:
    """|∂_r B[r, f] - (∂_a B)[r, l^a f] - B[r, f]/r| with a central difference in r."""
    if not 0 < h < r:
        raise InvalidInputError(f"step h = {h} must lie in (0, r)")
    core = s_core if s_core is not None else 40.0 * f.lam
    grid = SphereGrid.product(n_theta)
    rule = _s_rule(r + h, f.lam, core)
    value = _field_value(B)
    plus, _ = _cylinder_sum(value, r + h, f, None, grid, rule)
    minus, _ = _cylinder_sum(value, r - h, f, None, grid, rule)
    center, _ = _cylinder_sum(value, r, f, None, grid, rule)
    derivative, _ = _cylinder_sum(_directional(B), r, f, None, grid, rule)
    return float(abs((plus - minus) / (2.0 * h) - derivative - center / r))


# --- frame dependence ----------------------------------------------------------------


def _homogeneous_smear(B: FieldHandle, t: np.ndarray, g, f: NullProfile, base_frame, grid: SphereGrid,
                       rule, r_nodes: np.ndarray, r_weights: np.ndarray) -> complex:
    """(1/2π)∫g(r)∫ (r/t·l) B((st + rl)/t·l) f(s, l) ds d²l dr for an arbitrary timelike t."""
    s, ws, _ = rule
    l = grid.lightcone(base_frame)
    tau = l @ (ETA @ t)
    f_values = extend_homogeneous(f, s[:, None], l[None, :, :])
    total = 0.0 + 0.0j
    for r, wr in zip(r_nodes, r_weights):
        x = (s[:, None, None] * t + r * l[None, :, :]) / tau[None, :, None]
        values = (r / tau)[None, :] * B(x) * f_values
        total += wr * g(r) * np.sum(ws * (values @ grid.weights))
    return total / (2.0 * np.pi)


def _frame_setup(g, f: NullProfile, frame, n_theta: int, nodes: int, s_core: float):
    r_nodes, r_weights = g.quadrature(nodes)
    core = s_core if s_core is not None else 40.0 * f.lam
    rule = _s_rule(float(np.max(r_nodes)), f.lam, core)
    return r_nodes, r_weights, rule, SphereGrid.product(n_theta)


def _central_difference(B: FieldHandle, g, f: NullProfile, frame, direction: int, step: float, setup) -> complex:
    r_nodes, r_weights, rule, grid = setup
    t0 = _frame_components(frame)
    e = np.zeros(4)
    e[direction] = step
    plus = _homogeneous_smear(B, t0 + e, g, f, frame, grid, rule, r_nodes, r_weights)
    minus = _homogeneous_smear(B, t0 - e, g, f, frame, grid, rule, r_nodes, r_weights)
    return complex((plus - minus) / (2.0 * step))


def frame_change_derivative(B: FieldHandle, g, f: NullProfile, frame=None, direction: int = 0,
                            step: float = 1e-3, n_theta: int = 16, nodes: int = 48,
                            s_core: float = None) -> complex:
    """Central difference of B_t[g, f] in the component t^a, through the homogeneous form."""
    if direction not in range(4):
        raise InvalidInputError(f"direction index must be 0..3, got {direction}")
    setup = _frame_setup(g, f, frame, n_theta, nodes, s_core)
    return _central_difference(B, g, f, frame, direction, step, setup)


def _frame_identity_rhs(B: FieldHandle, g: ScaledKernel, f_dot: NullProfile, direction: int, frame,
                        setup) -> complex:
    """(∂_b B)[g_R, (δ_a^b - l_a t^b) s ḟ] + B[h_R, l_a ḟ]."""
    r_nodes, r_weights, rule, grid = setup
    t0 = _frame_components(frame)
    h_kernel = HKernel(g.g, g.R)
    s, ws, _ = rule
    l = grid.lightcone(frame)
    l_lower = (l @ ETA)[:, direction]
    f_values = extend_homogeneous(f_dot, s[:, None], l[None, :, :])
    first = 0.0 + 0.0j
    second = 0.0 + 0.0j
    for r, wr in zip(r_nodes, r_weights):
        x = s[:, None, None] * t0 + r * l[None, :, :]
        grad = B.gradient(x)
        along_t = grad @ t0
        projected = grad[..., direction] - l_lower[None, :] * along_t
        term = s[:, None] * f_values * projected
        first += wr * g(r) * r * np.sum(ws * (term @ grid.weights))
        term = B(x) * l_lower[None, :] * f_values
        second += wr * h_kernel(r) * r * np.sum(ws * (term @ grid.weights))
    return (first + second) / (2.0 * np.pi)


def _check_frame_kernel(g) -> None:
    if not isinstance(g, ScaledKernel) or g.eta != 1.0:
        raise InvalidInputError('the frame-derivative identity needs g_R(r) = R⁻¹g(r/R), i.e. η = 1')


def frame_derivative_residual(B: FieldHandle, g: ScaledKernel, f_dot: NullProfile, direction: int = 0,
                              frame=None, step: float = 1e-3, n_theta: int = 16, nodes: int = 48,
                              s_core: float = None) -> float:
    """|∂B[g_R, ḟ]/∂t^a - (∂_b B)[g_R, (δ_a^b - l_a t^b) s ḟ] - B[h_R, l_a ḟ]| in the t-gauge."""
    _check_frame_kernel(g)
    lhs = frame_change_derivative(B, g, f_dot, frame, direction, step, n_theta, nodes, s_core)
    setup = _frame_setup(g, f_dot, frame, n_theta, nodes, s_core)
    return float(abs(lhs - _frame_identity_rhs(B, g, f_dot, direction, frame, setup)))


@dataclass
class FrameOrderFit:
    steps: List[float]
    residuals: List[float]
    exponent: float
    table: List[dict] = field(default_factory=list)


def frame_derivative_order(B: FieldHandle, g: ScaledKernel, f_dot: NullProfile,
                           steps: Sequence[float] = (0.04, 0.02, 0.01), direction: int = 0, frame=None,
                           n_theta: int = 16, nodes: int = 48, s_core: float = None) -> FrameOrderFit:
    """Residuals of the frame-derivative identity over a step scan, with the difference order.

    The order is the log-log slope of successive differences of the difference quotient
    against the step, so the fixed quadrature error of the right-hand side drops out.
    Central differences give 2.
    """
    _check_frame_kernel(g)
    if direction not in range(4):
        raise InvalidInputError(f"direction index must be 0..3, got {direction}")
    steps = [float(h) for h in steps]
    if len(steps) < 3 or len(set(steps)) != len(steps) or min(steps) <= 0.0:
        raise InvalidInputError('the order fit needs at least three distinct positive steps')
    setup = _frame_setup(g, f_dot, frame, n_theta, nodes, s_core)
    rhs = _frame_identity_rhs(B, g, f_dot, direction, frame, setup)
    lhs = np.array([_central_difference(B, g, f_dot, frame, direction, h, setup) for h in steps])
    residuals = [float(v) for v in np.abs(lhs - rhs)]
    h = np.asarray(steps)
    exponent = scaling_exponent(np.sqrt(h[1:] * h[:-1]), np.abs(np.diff(lhs)))
    logger.debug('frame-derivative order %.3f over steps %s', exponent, steps)
    table = [{'step': s, 'derivative': complex(v), 'residual': res} for s, v, res in zip(steps, lhs, residuals)]
    return FrameOrderFit(steps, residuals, exponent, table)


# --- decay of derivative smearings -----------------------------------------------------


@dataclass
class DecayFit:
    R: List[float]
    values: List[complex]
    exponent: float
    table: List[dict] = field(default_factory=list)


def outgoing_derivative_decay(B: FieldHandle, kernel: SmearKernel, R_list: Sequence[float],
                              n_theta: int = 32, nodes: int = 48, threads: int = None) -> DecayFit:
    """(∂_a B)[g_R^η, l^a f] along R_list with its fitted log-log exponent (≈ -η expected)."""
    f = kernel.f
    grid = SphereGrid.product(n_theta)

    def run(R):
        g = kernel.scaled(R)
        r, w = g.quadrature(nodes)
        total = 0.0 + 0.0j
        for radius, weight in zip(r, w):
            rule = _s_rule(radius, f.lam, 40.0 * f.lam)
            value, _ = _cylinder_sum(_directional(B), radius, f, kernel.frame, grid, rule)
            total += weight * g(radius) * value
        return complex(total)

    values = map_ordered(run, list(R_list), threads)
    exponent = scaling_exponent(R_list, np.abs(values))
    table = [{'R': float(R), 'value': v} for R, v in zip(R_list, values)]
    return DecayFit(list(map(float, R_list)), values, exponent, table)


# --- momentum side ---------------------------------------------------------------------


def _momentum_sum(c: MomentumProfile, f: NullProfile, omega: np.ndarray, weights: np.ndarray,
                  factor: np.ndarray, grid: SphereGrid, antipodal: bool, chunk: int = 512) -> complex:
    """Σ_ω Σ_l w·factor(ω)·c(ωl)·f̃(-ω, ±n̂)."""
    n = grid.nodes
    n_f = -n if antipodal else n
    total = 0.0 + 0.0j
    for start in range(0, omega.size, chunk):
        block = omega[start:start + chunk, None]
        values = c.omega_c(block, n[None, :, :]) / block * f.transform(-block, n_f[None, :, :])
        total += np.sum((weights[start:start + chunk] * factor[start:start + chunk]) * (values @ grid.weights))
    return total


def _half_line(sign: int, top: float, width: float, nodes: int = 8):
    count = max(1, int(np.ceil(top / width)))
    omega, weights = composite_gauss_legendre(np.linspace(0.0, top, count + 1), nodes)
    return sign * omega, weights


def _check_sign_and_spectrum(c: MomentumProfile, sign: int, grid: SphereGrid):
    if sign not in (1, -1):
        raise InvalidInputError('sign must be +1 or -1')
    jump = float(np.max(np.abs(c.delta_b(grid.nodes))))
    if jump > 1e-10:
        raise InvalidInputError(f"c(k) ~ Δb/|k| is not integrable at k = 0 (max |Δb| = {jump:.3e}); "
                                'use an infrared-regular profile')


def momentum_limit(c: MomentumProfile, f: NullProfile, sign: int = 1, n_theta: int = 16,
                   omega_max: float = None) -> complex:
    """-i∫d²l ∫_{±ω>0} c(ωl) f̃(-ω, l) dω: the smeared asymptote concentrated on the lightcone sheet."""
    grid = SphereGrid.product(n_theta)
    _check_sign_and_spectrum(c, sign, grid)
    lam = min(c.profile.lam, f.lam)
    top = omega_max if omega_max is not None else 24.0 / lam
    omega, weights = _half_line(sign, top, 0.5 / lam)
    total = _momentum_sum(c, f, omega, weights, np.ones_like(omega), grid, False)
    return complex(-1j * total)


def wrong_term(c: MomentumProfile, g: ScaledKernel, f: NullProfile, R: float = None, sign: int = 1,
               n_theta: int = 16) -> complex:
    """+i∫d²l ∫_{±ω>0} c(ωl) 2π g̃_R(-2ω) f̃(-ω, -l) dω, the antipodal boundary term."""
    if R is not None and R != g.R:
        g = scaled_g(g.g, R, g.eta, g.lam)
    grid = SphereGrid.product(n_theta)
    _check_sign_and_spectrum(c, sign, grid)
    lam = min(c.profile.lam, f.lam)
    # g̃ of the bump is negligible beyond |u| = 400
    top = min(24.0 / lam, 200.0 / g.width)
    omega, weights = _half_line(sign, top, min(0.5 / lam, 0.25 / g.width))
    factor = 2.0 * np.pi * g.transform(-2.0 * omega)
    total = _momentum_sum(c, f, omega, weights, factor, grid, True)
    return complex(1j * total)


def momentum_side_smear(c: MomentumProfile, g: ScaledKernel, f: NullProfile, R: float = None,
                        sign: int = 1, n_theta: int = 16) -> complex:
    """Momentum-side prediction for B_±[g_R, f]: the sheet term plus the smeared antipodal term."""
    return momentum_limit(c, f, sign, n_theta) + wrong_term(c, g, f, R, sign, n_theta)
