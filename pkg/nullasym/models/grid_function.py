"""Sampled functions on a uniform grid over Minkowski space.

Samples sit at cell midpoints: node i along axis k is origin[k] + i*spacing[k].
Axis 0 is x⁰, axes 1..3 are x⃗.
"""
import logging
from typing import Callable, Optional, Sequence

import numpy as np

from nullasym.exceptions import InvalidInputError

logger = logging.getLogger(__name__)

Envelope = Callable[[np.ndarray], np.ndarray]


class GridFunction4:
    """Complex samples ρ(x⁰, x⃗) with an optional analytic envelope |ρ| ≤ E."""

    def __init__(self, samples, origin: Sequence[float], spacing: Sequence[float],
                 envelope: Optional[Envelope] = None, name: str = 'rho'):
        samples = np.asarray(samples)
        if samples.ndim != 4:
            raise InvalidInputError(f"grid function needs 4-dimensional samples, got shape {samples.shape}")
        spacing = np.asarray(spacing, dtype=float)
        if spacing.shape != (4,) or np.any(spacing <= 0):
            raise InvalidInputError(f"grid spacings must be four positive numbers, got {spacing.tolist()}")
        self.samples = samples.astype(complex, copy=False)
        self.origin = np.asarray(origin, dtype=float)
        self.spacing = spacing
        self.envelope = envelope
        self.name = name
        self.envelope_violations = self._check_envelope()

    @classmethod
    def sample(cls, func: Callable[[np.ndarray], np.ndarray], lower: Sequence[float],
               upper: Sequence[float], shape: Sequence[int], envelope: Optional[Envelope] = None,
               name: str = 'rho') -> 'GridFunction4':
        """Sample func(x) at the midpoints of a box divided into ``shape`` cells."""
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        shape = tuple(int(n) for n in shape)
        if np.any(upper <= lower):
            raise InvalidInputError('grid box needs upper > lower on every axis')
        spacing = (upper - lower) / np.asarray(shape)
        origin = lower + 0.5 * spacing
        grid = cls(np.zeros(shape), origin, spacing, None, name)
        grid.samples = np.asarray(func(grid.points()), dtype=complex)
        grid.envelope = envelope
        grid.envelope_violations = grid._check_envelope()
        return grid

    @property
    def shape(self):
        return self.samples.shape

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def spatial_volume(self) -> float:
        return float(np.prod(self.spacing[1:]))

    @property
    def lower(self) -> np.ndarray:
        return self.origin - 0.5 * self.spacing

    @property
    def upper(self) -> np.ndarray:
        return self.origin + (np.asarray(self.shape) - 0.5) * self.spacing

    def axis(self, k: int) -> np.ndarray:
        return self.origin[k] + self.spacing[k] * np.arange(self.shape[k])

    def points(self) -> np.ndarray:
        axes = np.meshgrid(*[self.axis(k) for k in range(4)], indexing='ij')
        return np.stack(axes, axis=-1)

    def spatial_points(self) -> np.ndarray:
        axes = np.meshgrid(*[self.axis(k) for k in range(1, 4)], indexing='ij')
        return np.stack(axes, axis=-1)

    def _check_envelope(self) -> int:
        if self.envelope is None:
            return 0
        bound = np.asarray(self.envelope(self.points()), dtype=float)
        violations = int(np.count_nonzero(np.abs(self.samples) > bound * (1.0 + 1e-12) + 1e-300))
        if violations:
            logger.warning('%s: envelope bound fails at %d of %d samples', self.name, violations, self.samples.size)
        return violations

    def boundary_fraction(self) -> float:
        """Largest sample on the outer faces of the box relative to the largest sample."""
        top = float(np.max(np.abs(self.samples))) if self.samples.size else 0.0
        if top == 0.0:
            return 0.0
        faces = 0.0
        for k in range(4):
            for index in (0, -1):
                face = np.take(self.samples, index, axis=k)
                faces = max(faces, float(np.max(np.abs(face))))
        return faces / top

    def compatible(self, other: 'GridFunction4') -> bool:
        return bool(np.allclose(self.spacing, other.spacing, rtol=1e-12, atol=0.0))

    def with_samples(self, samples, name: str = None, origin=None) -> 'GridFunction4':
        return GridFunction4(samples, self.origin if origin is None else origin, self.spacing,
                             None, name or self.name)

    def spatial_values(self, h) -> np.ndarray:
        """h₃ on the spatial grid, from samples of that shape or a callable of x⃗."""
        if callable(h):
            return np.asarray(h(self.spatial_points()))
        values = np.asarray(h)
        if values.shape != self.shape[1:]:
            raise InvalidInputError(f"spatial factor has shape {values.shape}, grid needs {self.shape[1:]}")
        return values

    def time_values(self, h) -> np.ndarray:
        """h₀ on the time axis, from samples of that length or a callable of x⁰."""
        if callable(h):
            return np.asarray(h(self.axis(0)))
        values = np.asarray(h)
        if values.shape != self.shape[:1]:
            raise InvalidInputError(f"time factor has shape {values.shape}, grid needs {self.shape[:1]}")
        return values

    def multiply_spatial(self, h) -> 'GridFunction4':
        """ρ(x⁰, x⃗)·h₃(x⃗) for h₃ given as samples on the spatial grid or a callable."""
        return self.with_samples(self.samples * self.spatial_values(h)[None, ...], f"h3*{self.name}")

    def multiply_time(self, h) -> 'GridFunction4':
        """ρ(x⁰, x⃗)·h₀(x⁰)."""
        return self.with_samples(self.samples * self.time_values(h)[:, None, None, None], f"h0*{self.name}")

    def _check_compatible(self, other: 'GridFunction4'):
        if self.shape != other.shape or not self.compatible(other) or not np.allclose(self.origin, other.origin):
            raise InvalidInputError('grid functions live on different grids')

    def __add__(self, other: 'GridFunction4') -> 'GridFunction4':
        self._check_compatible(other)
        return self.with_samples(self.samples + other.samples, f"{self.name}+{other.name}")

    def __mul__(self, scalar) -> 'GridFunction4':
        return self.with_samples(complex(scalar) * self.samples, f"{scalar}*{self.name}")

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"GridFunction4({self.name!r}, shape={self.shape}, spacing={self.spacing.tolist()})"
