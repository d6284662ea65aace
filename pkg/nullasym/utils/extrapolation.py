"""Limit extrapolation and convergence-rate fits for sequences in r."""
from dataclasses import dataclass, field
import logging
from typing import List, Sequence

import numpy as np
from scipy import stats

from nullasym.exceptions import InvalidInputError

logger = logging.getLogger(__name__)

# Differences below this are treated as converged to machine precision.
ROUNDOFF_FLOOR = 1e-13


@dataclass
class RateFit:
    rate: float
    reliable: bool
    note: str = ''


@dataclass
class Extrapolation:
    limit: complex
    rate: float
    reliable: bool
    table: List[dict] = field(default_factory=list)


def polynomial_limit(steps: Sequence[float], values: Sequence[complex], degree: int = None) -> complex:
    """Constant term of a least-squares polynomial in the step size."""
    h = np.asarray(steps, dtype=float)
    v = np.asarray(values)
    if degree is None:
        degree = len(h) - 1
    degree = min(degree, len(h) - 1)
    mat = np.vander(h, degree + 1, increasing=True)
    coeffs, *_ = np.linalg.lstsq(mat, v, rcond=None)
    return coeffs[0]


def fit_rate(r_values: Sequence[float], values: Sequence[complex]) -> RateFit:
    """Convergence exponent p of values -> limit like r^-p.

    Uses successive differences so the (unknown) limit drops out. Sequences
    already at round-off report an infinite rate.
    """
    r = np.asarray(r_values, dtype=float)
    v = np.asarray(values)
    if r.size < 3:
        return RateFit(float('nan'), False, 'fewer than three points')
    diffs = np.abs(np.diff(v))
    scale = max(1.0, float(np.max(np.abs(v))))
    if np.all(diffs <= ROUNDOFF_FLOOR * scale):
        return RateFit(float('inf'), True, 'converged to round-off')
    mids = np.sqrt(r[1:] * r[:-1])
    usable = diffs > ROUNDOFF_FLOOR * scale
    if usable.sum() < 2:
        return RateFit(float('inf'), True, 'converged to round-off after first step')
    fit = stats.linregress(np.log(mids[usable]), np.log(diffs[usable]))
    monotone = bool(np.all(np.diff(diffs[usable]) < 0))
    note = '' if monotone else 'non-monotone differences'
    if not monotone:
        logger.warning('convergence rate unreliable: %s', note)
    return RateFit(float(-fit.slope), monotone, note)


def scaling_exponent(x_values: Sequence[float], values: Sequence[float], mode: str = 'values') -> float:
    """Log-log slope of |values| against x.

    ``mode='increments'`` fits the successive increments instead, which removes
    an additive constant from a power law a*x^p + b.
    """
    x = np.asarray(x_values, dtype=float)
    y = np.abs(np.asarray(values, dtype=float))
    if mode == 'increments':
        y = np.abs(np.diff(y))
        x = np.sqrt(x[1:] * x[:-1])
    elif mode != 'values':
        raise InvalidInputError(f"unknown mode {mode!r}")
    keep = y > 0
    if keep.sum() < 2:
        return float('-inf')
    fit = stats.linregress(np.log(x[keep]), np.log(y[keep]))
    return float(fit.slope)


def extrapolate_in_r(r_values: Sequence[float], values: Sequence[complex], degree: int = None) -> Extrapolation:
    """Limit as r -> ∞ by a polynomial fit in h = 1/r, with the fitted rate."""
    r = np.asarray(r_values, dtype=float)
    if np.any(np.diff(r) <= 0):
        raise InvalidInputError('r values must be strictly increasing')
    v = np.asarray(values)
    limit = polynomial_limit(1.0 / r, v, degree)
    rate = fit_rate(r, v)
    table = [
        {'r': float(ri), 'value': complex(vi), 'residual': float(abs(vi - limit))}
        for ri, vi in zip(r, v)
    ]
    return Extrapolation(limit=complex(limit), rate=rate.rate, reliable=rate.reliable, table=table)
