"""Minkowski geometry: four-vectors, boosts, the lightcone in t-gauge and sphere rules.

Signature is (+,-,-,-). Arrays of four-vectors carry the components in the
last axis, so every helper here broadcasts over leading dimensions.
"""
from __future__ import annotations

import logging
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from nullasym.exceptions import InvalidInputError
from nullasym.utils.quadrature import (
    composite_gauss_legendre,
    gauss_legendre,
    polar_product,
    rotation_to_axis,
)

logger = logging.getLogger(__name__)

ETA = np.diag([1.0, -1.0, -1.0, -1.0])
E0 = np.array([1.0, 0.0, 0.0, 0.0])


def minkowski_dot(a, b) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    return a[..., 0] * b[..., 0] - np.sum(a[..., 1:] * b[..., 1:], axis=-1)


def _components(x) -> np.ndarray:
    if isinstance(x, FourVector):
        return x.components
    return np.asarray(x, dtype=float)


class FourVector:
    """A vector of Minkowski space in a fixed orthonormal basis."""

    __slots__ = ('components',)

    def __init__(self, components: Sequence[float]):
        c = np.array(components, dtype=float)
        if c.shape != (4,):
            raise InvalidInputError(f"a four-vector needs 4 components, got shape {c.shape}")
        c.setflags(write=False)
        self.components = c

    @classmethod
    def from_parts(cls, time: float, spatial: Sequence[float]) -> 'FourVector':
        return cls(np.concatenate([[float(time)], np.asarray(spatial, dtype=float)]))

    @property
    def time(self) -> float:
        return float(self.components[0])

    @property
    def spatial(self) -> np.ndarray:
        return self.components[1:]

    @property
    def norm3(self) -> float:
        return float(np.linalg.norm(self.components[1:]))

    def dot(self, other) -> float:
        return float(minkowski_dot(self.components, _components(other)))

    def square(self) -> float:
        return self.dot(self)

    def is_timelike(self, tol: float = 0.0) -> bool:
        return self.square() > tol

    def is_future_timelike(self) -> bool:
        return self.is_timelike() and self.time > 0

    # p± = p⁰ ± |p⃗|
    def plus(self) -> float:
        return self.time + self.norm3

    def minus(self) -> float:
        return self.time - self.norm3

    # p̂± = t ± p̂ with t = e₀
    def hat_plus(self) -> 'FourVector':
        return FourVector.from_parts(1.0, self._direction())

    def hat_minus(self) -> 'FourVector':
        return FourVector.from_parts(1.0, -self._direction())

    def _direction(self) -> np.ndarray:
        norm = self.norm3
        if norm == 0.0:
            raise InvalidInputError('p̂ is undefined for a vector with zero spatial part')
        return self.spatial / norm

    def __add__(self, other) -> 'FourVector':
        return FourVector(self.components + _components(other))

    def __sub__(self, other) -> 'FourVector':
        return FourVector(self.components - _components(other))

    def __mul__(self, scalar: float) -> 'FourVector':
        return FourVector(self.components * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> 'FourVector':
        return FourVector(self.components / float(scalar))

    def __neg__(self) -> 'FourVector':
        return FourVector(-self.components)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.components, dtype=dtype)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FourVector):
            return NotImplemented
        return bool(np.array_equal(self.components, other.components))

    def __hash__(self):
        return hash(self.components.tobytes())

    def __repr__(self) -> str:
        return f"FourVector({', '.join(repr(float(c)) for c in self.components)})"


REST_FRAME = FourVector(E0)


class Boost:
    """Pure boost of given rapidity along a spatial unit axis."""

    def __init__(self, rapidity: float, axis: Sequence[float] = (0.0, 0.0, 1.0)):
        axis = np.asarray(axis, dtype=float)
        norm = np.linalg.norm(axis)
        if norm == 0.0:
            raise InvalidInputError('boost axis must be non-zero')
        self.rapidity = float(rapidity)
        self.axis = axis / norm
        self._matrix = None

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            ch = np.cosh(self.rapidity)
            sh = np.sinh(self.rapidity)
            a = self.axis
            m = np.empty((4, 4))
            m[0, 0] = ch
            m[0, 1:] = sh * a
            m[1:, 0] = sh * a
            m[1:, 1:] = np.eye(3) + (ch - 1.0) * np.outer(a, a)
            m.setflags(write=False)
            self._matrix = m
        return self._matrix

    @classmethod
    def from_frame(cls, frame) -> 'Boost':
        """The boost without rotation taking e₀ to the unit timelike vector ``frame``."""
        t = _components(frame)
        square = float(minkowski_dot(t, t))
        if square <= 0.0 or t[0] <= 0.0:
            raise InvalidInputError(f"frame {t} is not future timelike")
        if abs(square - 1.0) > 1e-10:
            raise InvalidInputError(f"frame {t} is not normalized (t·t = {square})")
        spatial = t[1:]
        norm = float(np.linalg.norm(spatial))
        if norm == 0.0:
            return cls(0.0)
        return cls(np.arcsinh(norm), spatial / norm)

    def inverse(self) -> 'Boost':
        return Boost(-self.rapidity, self.axis)

    def apply(self, x):
        """Boost a FourVector or an array of four-vectors (last axis)."""
        if isinstance(x, FourVector):
            return FourVector(self.matrix @ x.components)
        return np.asarray(x, dtype=float) @ self.matrix.T

    def frame(self) -> FourVector:
        return FourVector(self.matrix[:, 0])

    def __repr__(self) -> str:
        return f"Boost(rapidity={self.rapidity!r}, axis={self.axis.tolist()!r})"


def boost_apply(boost: Boost, x: FourVector) -> FourVector:
    return boost.apply(x)


def lightcone_vector(n_hat, frame=None) -> np.ndarray:
    """l = B_t(1, n̂): the null vector with t·l = 1 in direction n̂ of frame t."""
    n = np.asarray(n_hat, dtype=float)
    ones = np.ones(n.shape[:-1] + (1,))
    l0 = np.concatenate([ones, n], axis=-1)
    if frame is None:
        return l0
    t = _components(frame)
    if np.array_equal(t, E0):
        return l0
    return l0 @ Boost.from_frame(t).matrix.T


def frame_direction(l, frame=None) -> np.ndarray:
    """Inverse of lightcone_vector for l with t·l = 1: the spatial direction n̂."""
    l = np.asarray(l, dtype=float)
    if frame is not None and not np.array_equal(_components(frame), E0):
        l = l @ Boost.from_frame(frame).inverse().matrix.T
    return l[..., 1:] / l[..., :1]


class NullDirection:
    """A future null vector l = t + n̂ in the gauge of frame t (t·l = 1)."""

    def __init__(self, n_hat: Sequence[float], frame: Optional[FourVector] = None):
        n = np.array(n_hat, dtype=float)
        if n.shape != (3,):
            raise InvalidInputError(f"n̂ must be a 3-vector, got shape {n.shape}")
        if abs(np.linalg.norm(n) - 1.0) > 1e-12:
            raise InvalidInputError(f"n̂ = {n.tolist()} is not a unit vector")
        n.setflags(write=False)
        self.n_hat = n
        self.frame = frame if frame is not None else REST_FRAME

    @property
    def vector(self) -> FourVector:
        return FourVector(lightcone_vector(self.n_hat, self.frame))

    def __repr__(self) -> str:
        return f"NullDirection(n_hat={self.n_hat.tolist()!r}, frame={self.frame!r})"


def regauge(l: NullDirection, new_frame: FourVector) -> Tuple[NullDirection, float]:
    """Express l in the t'-gauge: returns (l/(t'·l), (t'·l)^-2)."""
    if not new_frame.is_future_timelike():
        raise InvalidInputError(f"{new_frame!r} is not a future timelike frame")
    vec = l.vector
    scale = new_frame.dot(vec)
    rescaled = vec.components / scale
    n_new = frame_direction(rescaled, new_frame)
    n_new = n_new / np.linalg.norm(n_new)
    return NullDirection(n_new, new_frame), scale ** -2


def gauge_weights(grid: 'SphereGrid', new_frame: FourVector, frame=None) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes of ``grid`` in frame t rescaled into the t'-gauge, with reweighted weights.

    For f homogeneous of degree -2, Σ f(l')·w' equals Σ f(l)·w: a gauge change
    only reweights the same nodes.
    """
    l = grid.lightcone(frame)
    scale = minkowski_dot(new_frame.components, l)
    return l / scale[:, None], grid.weights * scale ** -2


class SphereGrid:
    """A quadrature rule on the unit sphere (the t-gauge section of the lightcone)."""

    def __init__(self, nodes: np.ndarray, weights: np.ndarray, n_theta: int = None,
                 n_phi: int = None, scheme: str = 'product', degree: int = None):
        nodes = np.asarray(nodes, dtype=float)
        weights = np.asarray(weights, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != 3 or weights.shape != nodes.shape[:1]:
            raise InvalidInputError('sphere grid needs nodes of shape (N, 3) and N weights')
        nodes.setflags(write=False)
        weights.setflags(write=False)
        self.nodes = nodes
        self.weights = weights
        self.n_theta = n_theta
        self.n_phi = n_phi
        self.scheme = scheme
        self.degree = degree

    @classmethod
    def product(cls, n_theta: int = 64, n_phi: int = None, axis=None) -> 'SphereGrid':
        """Gauss-Legendre in cos θ times trapezoid in φ, N_φ = 2 N_θ by default."""
        if n_phi is None:
            n_phi = 2 * n_theta
        u, wu = gauss_legendre(n_theta)
        nodes, weights = polar_product(u, wu, n_phi, axis)
        return cls(nodes, weights, n_theta, n_phi, 'product', min(2 * n_theta - 1, n_phi - 1))

    @classmethod
    def composite(cls, u_breaks: Sequence[float], nodes_per_panel: int = 8,
                  n_phi: int = 64, axis=None) -> 'SphereGrid':
        """Panels of Gauss-Legendre in u = n̂·axis; graded breaks concentrate nodes."""
        breaks = np.unique(np.clip(np.asarray(u_breaks, dtype=float), -1.0, 1.0))
        u, wu = composite_gauss_legendre(breaks, nodes_per_panel)
        nodes, weights = polar_product(u, wu, n_phi, axis)
        return cls(nodes, weights, len(u), n_phi, 'composite')

    @property
    def size(self) -> int:
        return self.weights.size

    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    def lightcone(self, frame=None) -> np.ndarray:
        return lightcone_vector(self.nodes, frame)

    def integrate(self, values) -> complex:
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))

    def __repr__(self) -> str:
        return f"SphereGrid(scheme={self.scheme!r}, n_theta={self.n_theta}, n_phi={self.n_phi}, size={self.size})"


def invariant_sphere_integral(f: Callable[[np.ndarray], np.ndarray], grid: SphereGrid, frame=None):
    """Quadrature of ∫ f(l) d²l over the lightcone section t·l = 1 of ``frame``.

    ``f`` receives the (N, 4) array of null vectors and must be homogeneous of
    degree -2 for the result to be frame independent.
    """
    l = grid.lightcone(frame)
    values = np.asarray(f(l))
    bad = ~np.isfinite(values)
    if np.any(bad):
        index = int(np.flatnonzero(bad)[0])
        logger.warning('non-finite integrand at node %d, n̂ = %s', index, grid.nodes[index].tolist())
        return float('nan')
    return grid.integrate(values)


def spherical_angles(n) -> Tuple[np.ndarray, np.ndarray]:
    n = np.asarray(n, dtype=float)
    theta = np.arccos(np.clip(n[..., 2], -1.0, 1.0))
    phi = np.arctan2(n[..., 1], n[..., 0])
    return theta, phi


def from_angles(theta, phi) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi),
                     np.cos(theta) * np.ones_like(phi)], axis=-1)


_X_CHART = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def surface_laplacian(f: Callable, n_hat, analytic: Callable = None, h: float = 1e-3,
                      pole_threshold: float = 0.1) -> np.ndarray:
    """Δ_S f at unit vectors n̂ by central differences in (θ, φ).

    Near the poles of the chart (|sin θ| < pole_threshold) the chart with
    polar axis ŷ is used instead. A caller-supplied ``analytic`` Laplacian
    short-circuits the differences.
    """
    n = np.asarray(n_hat, dtype=float)
    if analytic is not None:
        return np.asarray(analytic(n))

    squeeze = n.ndim == 1
    n = np.atleast_2d(n)
    near_pole = np.sqrt(n[:, 0] ** 2 + n[:, 1] ** 2) < pole_threshold
    # chart coordinates with polar axis ŷ near the z-poles
    local = np.where(near_pole[:, None], n @ _X_CHART.T, n)

    def g(theta, phi, use_x):
        points = from_angles(theta, phi)
        points = np.where(use_x[:, None], points @ _X_CHART, points)
        return np.asarray(f(points))

    theta, phi = spherical_angles(local)
    f0 = g(theta, phi, near_pole)
    f_tp = g(theta + h, phi, near_pole)
    f_tm = g(theta - h, phi, near_pole)
    f_pp = g(theta, phi + h, near_pole)
    f_pm = g(theta, phi - h, near_pole)
    f_tt = (f_tp - 2.0 * f0 + f_tm) / h ** 2
    f_t = (f_tp - f_tm) / (2.0 * h)
    f_pp2 = (f_pp - 2.0 * f0 + f_pm) / h ** 2
    sin_t = np.sin(theta)
    result = f_tt + np.cos(theta) / sin_t * f_t + f_pp2 / sin_t ** 2
    return result[0] if squeeze else result


def generator_transform(a: int, b: int, alpha: float) -> np.ndarray:
    """exp(α M_ab) for the Lorentz generator in the (a, b) plane."""
    if a == b or not (0 <= a < 4 and 0 <= b < 4):
        raise InvalidInputError(f"invalid generator indices ({a}, {b})")
    sign = 1.0
    if a > b:
        a, b = b, a
        sign = -1.0
    alpha = sign * alpha
    if a == 0:
        axis = np.zeros(3)
        axis[b - 1] = 1.0
        return np.array(Boost(alpha, axis).matrix)
    m = np.eye(4)
    c, s = np.cos(alpha), np.sin(alpha)
    m[a, a] = c
    m[a, b] = -s
    m[b, a] = s
    m[b, b] = c
    return m


LORENTZ_GENERATORS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def lorentz_generator_action(g: Callable, a: int, b: int, l, h: float = 1e-3) -> np.ndarray:
    """L_ab g(l) = d/dα g(exp(α M_ab) l) at α = 0, fourth-order central difference."""
    l = np.asarray(l, dtype=float)

    def at(alpha):
        return np.asarray(g(l @ generator_transform(a, b, alpha).T))

    return (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h)


def angular_momentum_action(f: Callable, n_hat, h: float = 1e-3) -> np.ndarray:
    """M⃗f = n̂ × ∇F with F the degree-0 extension of f off the sphere."""
    n = np.asarray(n_hat, dtype=float)

    def F(x):
        return np.asarray(f(x / np.linalg.norm(x, axis=-1, keepdims=True)))

    grads = []
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        grads.append((-F(n + 2 * e) + 8.0 * F(n + e) - 8.0 * F(n - e) + F(n - 2 * e)) / (12.0 * h))
    grad = np.stack(grads, axis=-1)
    return np.cross(n, grad)
