"""Quadrature rules used across the package.

All rules return ``(nodes, weights)`` as float64 numpy arrays. Gauss-Legendre
panels are the workhorse; graded panel layouts put nodes where integrands
concentrate (near a null direction, around a circle on the sphere).
"""
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from nullasym.exceptions import InvalidInputError

Rule = Tuple[np.ndarray, np.ndarray]


@lru_cache(maxsize=64)
def _reference_rule(n: int) -> Rule:
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0) -> Rule:
    """n-point Gauss-Legendre rule on [a, b]."""
    x, w = _reference_rule(int(n))
    half = 0.5 * (b - a)
    return half * x + 0.5 * (a + b), half * w


def composite_gauss_legendre(breaks: Sequence[float], n: int) -> Rule:
    """Gauss-Legendre with ``n`` nodes on every panel between consecutive breaks."""
    breaks = np.asarray(breaks, dtype=float)
    if breaks.ndim != 1 or breaks.size < 2:
        raise InvalidInputError('need at least two panel breaks')
    x, w = _reference_rule(int(n))
    a = breaks[:-1, None]
    b = breaks[1:, None]
    half = 0.5 * (b - a)
    nodes = half * x[None, :] + 0.5 * (a + b)
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def geometric_breaks(start: float, stop: float, ratio: float = 2.0) -> np.ndarray:
    """Breaks start, start*ratio, ... closed with ``stop``."""
    if stop <= start:
        return np.array([start, stop], dtype=float)
    count = int(np.ceil(np.log(stop / start) / np.log(ratio)))
    breaks = start * ratio ** np.arange(count + 1)
    breaks[-1] = stop
    return breaks


def graded_breaks(width: float, fine_limit: float, stop: float, ratio: float = 2.0) -> np.ndarray:
    """Uniform panels of ``width`` on [0, fine_limit], geometric growth up to ``stop``."""
    if stop <= fine_limit:
        count = max(1, int(np.ceil(stop / width)))
        return np.linspace(0.0, stop, count + 1)
    count = max(1, int(np.ceil(fine_limit / width)))
    fine = np.linspace(0.0, fine_limit, count + 1)
    coarse = geometric_breaks(fine_limit, stop, ratio)
    return np.concatenate([fine, coarse[1:]])


def real_line_rule(scale: float, core: float = 40.0, n_core: int = 16,
                   panels_per_scale: int = 1, n_tail: int = 48) -> Rule:
    """Rule for ∫_{-∞}^{∞} f(s) ds with f decaying like a power of |s|.

    The core [-core*scale, core*scale] gets uniform panels of width ``scale``;
    each tail is mapped by s = S/u onto u in (0, 1].
    """
    half = core * scale
    count = max(2, int(np.ceil(2 * core * panels_per_scale)))
    x_core, w_core = composite_gauss_legendre(np.linspace(-half, half, count + 1), n_core)
    u, wu = gauss_legendre(n_tail, 0.0, 1.0)
    x_tail = half / u
    w_tail = wu * half / u ** 2
    nodes = np.concatenate([-x_tail[::-1], x_core, x_tail])
    weights = np.concatenate([w_tail[::-1], w_core, w_tail])
    return nodes, weights


def periodic_trapezoid(n: int, offset: float = 0.0) -> Rule:
    """Trapezoid rule on [0, 2π); exact for trigonometric degree < n."""
    phi = offset + 2.0 * np.pi * np.arange(n) / n
    return phi, np.full(n, 2.0 * np.pi / n)


def rotation_to_axis(axis: Sequence[float]) -> np.ndarray:
    """Rotation matrix R with R @ e_z = axis (axis normalized)."""
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    z = np.array([0.0, 0.0, 1.0])
    c = float(np.dot(z, a))
    if c > 1.0 - 1e-15:
        return np.eye(3)
    if c < -1.0 + 1e-15:
        return np.diag([1.0, -1.0, -1.0])
    v = np.cross(z, a)
    s2 = float(np.dot(v, v))
    vx = np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])
    return np.eye(3) + vx + vx @ vx * ((1.0 - c) / s2)


def polar_product(u: np.ndarray, wu: np.ndarray, n_phi: int, axis=None) -> Rule:
    """Sphere rule from a rule in u = cos θ (about ``axis``) times trapezoid in φ."""
    phi, wphi = periodic_trapezoid(n_phi)
    sin_t = np.sqrt(np.clip(1.0 - u ** 2, 0.0, None))
    nodes = np.stack([
        sin_t[:, None] * np.cos(phi)[None, :],
        sin_t[:, None] * np.sin(phi)[None, :],
        np.broadcast_to(u[:, None], (u.size, phi.size)),
    ], axis=-1).reshape(-1, 3)
    weights = (wu[:, None] * wphi[None, :]).ravel()
    if axis is not None:
        nodes = nodes @ rotation_to_axis(axis).T
    return nodes, weights


def window_rule(lo: float, hi: float, width: float, n: int = 8, tail_scale: float = None,
                n_tail: int = 48) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rule for ∫_{-∞}^{∞} with uniform panels on [lo, hi] and mapped tails beyond.

    Each tail uses s = hi + L(1 - u)/u (mirrored at ``lo``), u in (0, 1].
    Returns nodes, weights and the mask of tail nodes.
    """
    if hi <= lo:
        raise InvalidInputError('window must have hi > lo')
    tail_scale = tail_scale if tail_scale is not None else hi - lo
    count = max(1, int(np.ceil((hi - lo) / width)))
    x_core, w_core = composite_gauss_legendre(np.linspace(lo, hi, count + 1), n)
    u, wu = gauss_legendre(n_tail, 0.0, 1.0)
    offset = tail_scale * (1.0 - u) / u
    w_tail = wu * tail_scale / u ** 2
    nodes = np.concatenate([lo - offset[::-1], x_core, hi + offset])
    weights = np.concatenate([w_tail[::-1], w_core, w_tail])
    tail = np.concatenate([np.ones(n_tail, bool), np.zeros(x_core.size, bool), np.ones(n_tail, bool)])
    return nodes, weights, tail
