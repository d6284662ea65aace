
import numpy as np

from nullasym.models.profiles import SeparableProfile, get_preset, smearing_profile
from nullasym.models.report import DERIVED, PAPER, TRIVIAL
from nullasym.experiments import ExperimentGroup
from nullasym.physics.classical_field import (
    NullDataField,
    PlaneWave,
    SphericalWave,
    null_asymptote,
    spacelike_tail,
    wave_residual,
)
from nullasym.physics.smearing import deriv_identity_residual
from nullasym.utils.extrapolation import scaling_exponent

classical_bp = ExperimentGroup('classical')

# (x, n̂) pairs probed by the null asymptote.
NULL_PAIRS = (
    ((0.0, 0.0, 0.0, 0.0), (0.0, 0.0, 1.0)),
    ((0.5, 0.2, -0.1, 0.3), (0.0, 0.6, 0.8)),
    ((-0.4, 0.1, 0.3, 0.0), (0.6, 0.0, -0.8)),
    ((1.0, 0.0, 0.0, 0.5), (0.0, 0.0, 1.0)),
    ((0.2, -0.3, 0.2, 0.1), (0.48, 0.6, 0.64)),
)

SPACELIKE_DIRECTIONS = (
    (0.0, 0.0, 1.0, 0.0),
    (0.5, 0.0, 0.0, 1.0),
    (0.2, 0.6, 0.0, 0.8),
)

ORIGIN = (0.0, 0.0, 0.0, 0.0)


@classical_bp.experiment('field-eval', presets=('tanh', 'gauss_bump'), grid={'n_theta': 64},
                         options={'points': 50, 'extent': 2.0})
def field_eval(run):
    """Sphere-quadrature B(x) against the closed-form spherical wave (or a refined grid)."""
    n_theta = run.order('n_theta')
    extent = float(run.option('extent'))
    x = run.rng.uniform(-extent, extent, size=(int(run.option('points')), 4))

    for name in run.presets:
        p = run.preset(name).profile
        measured = NullDataField(p, n_theta=n_theta)(x)
        if isinstance(p, SeparableProfile) and p.is_isotropic():
            reference = SphericalWave(p)(x)
            label, provenance = f"{name}/spherical-oracle", DERIVED
        else:
            reference = NullDataField(p, n_theta=2 * n_theta)(x)
            label, provenance = f"{name}/refinement", DERIVED
        scale = max(float(np.max(np.abs(reference))), 1e-300)
        error = float(np.max(np.abs(measured - reference))) / scale
        run.check(label, error, error <= run.tol(1e-6), provenance, reference=0.0, error=error,
                  tolerance=run.tol(1e-6), preset=name, n_theta=n_theta, points=len(x))
        run.table('points', [
            {'preset': name, 'x0': xi[0], 'x1': xi[1], 'x2': xi[2], 'x3': xi[3], 'B': m, 'reference': r}
            for xi, m, r in zip(x, measured, reference)
        ])


@classical_bp.experiment('asymptote', presets=('tanh', 'gauss_bump', 'compact_angular_pair'),
                         lists={'r': [20.0, 40.0, 80.0, 160.0]}, options={'sign': 1, 'lam': 0.5})
def asymptote(run):
    """Extrapolated r·B(x ± r l) against b_out (future) or -b_in (past)."""
    r_list = sorted(run.values('r'))
    sign = int(run.option('sign'))
    lam = float(run.option('lam'))

    for name in run.presets:
        p = get_preset(name, lam).profile
        rates = []
        for index, (x, n_hat) in enumerate(NULL_PAIRS):
            result = null_asymptote(p, x, n_hat, r_list, sign=sign, threads=run.threads)
            label = f"{name}/pair{index}"
            run.compare(label, result.limit, result.expected, DERIVED, run.tol(1e-4),
                        preset=name, x=list(x), n=list(n_hat), sign=sign)
            run.check(f"{label}/rate", result.rate, result.rate >= 0.8, PAPER, reference=0.8,
                      preset=name, x=list(x), n=list(n_hat), sign=sign)
            rates.append(result.rate)
            run.table('rB', [
                {'preset': name, 'pair': index, 'r': row['r'], 'rB': row['value'], 'residual': row['residual']}
                for row in result.table
            ])
        run.fit(f"{name}/rates", rates)


@classical_bp.experiment('tail', presets=('tanh', 'gauss_bump'), lists={'r': [20.0, 40.0, 80.0, 160.0]})
def tail(run):
    """Spacelike 1/r tail against the circle integral of Δb; zero for infrared-regular data."""
    r_list = sorted(run.values('r'))

    for name in run.presets:
        preset = run.preset(name)
        p = preset.profile
        for index, y in enumerate(SPACELIKE_DIRECTIONS):
            plus = spacelike_tail(p, ORIGIN, y, r_list, threads=run.threads)
            minus = spacelike_tail(p, ORIGIN, np.negative(y), r_list, threads=run.threads)
            label = f"{name}/y{index}"
            if preset.infrared_regular:
                run.compare(label, plus.limit, 0.0, TRIVIAL, run.tol(1e-4), preset=name, y=list(y))
            else:
                run.compare(label, plus.limit, plus.expected, DERIVED, run.tol(1e-3), preset=name, y=list(y))
            run.compare(f"{label}/evenness", plus.limit, minus.limit, DERIVED, run.tol(1e-6),
                        preset=name, y=list(y))
            run.table('tail', [
                {'preset': name, 'y': index, 'r': row['r'], 'rB': row['value'], 'residual': row['residual']}
                for row in plus.table
            ])


@classical_bp.experiment('wave-check', presets=('tanh',), lists={'h': [0.04, 0.02, 0.01]},
                         grid={'n_theta': 16}, options={'x': [1.0, 0.0, 0.0, 2.0], 'r': 10.0})
def wave_check(run):
    """Second-order decay of the d'Alembertian residual and of the smeared derivative identity."""
    steps = run.values('h')
    x = np.asarray(run.option('x'), dtype=float)

    for name in run.presets:
        p = run.preset(name).profile
        residuals = [abs(wave_residual(p, x, h)) for h in steps]
        order = scaling_exponent(steps, residuals)
        run.compare(f"{name}/wave-order", order, 2.0, DERIVED, 0.2, preset=name)
        run.table('wave', [{'preset': name, 'h': h, 'residual': res} for h, res in zip(steps, residuals)])
        run.fit(f"{name}/wave_order", order)

    wave = PlaneWave([0.5, 0.0, 0.0, 0.5])
    f = smearing_profile()
    r = float(run.option('r'))
    residuals = [deriv_identity_residual(wave, r, f, h=h, n_theta=run.order('n_theta')) for h in steps]
    order = scaling_exponent(steps, residuals)
    run.compare('plane-wave/derivative-order', order, 2.0, DERIVED, 0.2, r=r)
    run.table('derivative', [{'h': h, 'residual': res} for h, res in zip(steps, residuals)])
    run.fit('derivative_order', order)
