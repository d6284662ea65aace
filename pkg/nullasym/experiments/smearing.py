import logging

from nullasym.models.geometry import Boost
from nullasym.models.profiles import (
    GKernel,
    SeparableProfile,
    dipole_angular,
    frequency_split,
    scaled_g,
    smearing_profile,
)
from nullasym.models.report import DERIVED, PAPER
from nullasym.experiments import ExperimentGroup
from nullasym.physics.classical_field import ConstantField, MomentumProfile, SphericalWave
from nullasym.physics.smearing import (
    SmearKernel,
    asymptote_functional,
    deriv_identity_residual,
    frame_derivative_order,
    frame_derivative_residual,
    lorentz_invariance_check,
    momentum_limit,
    momentum_side_smear,
    outgoing_derivative_decay,
    smear_g,
    smear_r,
    wrong_term,
)
from nullasym.utils.extrapolation import extrapolate_in_r, scaling_exponent

logger = logging.getLogger(__name__)

smearing_bp = ExperimentGroup('smearing')


@smearing_bp.experiment('smear', presets=('tanh',), grid={'n_theta': 16},
                        options={'frame_R': 40.0, 'frame_steps': [0.04, 0.02, 0.01]},
                        lists={'r': [20.0, 40.0, 80.0, 160.0], 'R': [20.0, 40.0, 80.0]})
def smear(run):
    """B[r, f] and B[g_R, f] converging to the asymptote functional, with the smeared identities."""
    n_theta = run.order('n_theta')
    r_list = sorted(run.values('r'))
    R_list = sorted(run.values('R'))
    f = smearing_profile()
    frame_R = float(run.option('frame_R'))
    frame_steps = [float(h) for h in run.option('frame_steps')]

    def frame_order(name, field):
        order = frame_derivative_order(field, scaled_g(GKernel(), frame_R), f, frame_steps, 0, n_theta=8)
        run.compare(f"{name}/frame-derivative/order", order.exponent, 2.0, DERIVED, 0.2, preset=name,
                    R=frame_R, steps=frame_steps)
        run.fit(f"{name}/frame_derivative_order", order.exponent)
        run.table('frame_order', [dict(preset=name, **row) for row in order.table])

    frame_order('constant', ConstantField(1.0))

    for name in run.presets:
        p = run.preset(name).profile
        limit = asymptote_functional(p, f, n_theta=n_theta)
        values = [smear_r(p, r, f, n_theta=n_theta) for r in r_list]
        fit = extrapolate_in_r(r_list, values, min(3, len(r_list) - 1))
        run.compare(f"{name}/smear-r", fit.limit, limit, DERIVED, run.tol(1e-4), preset=name)
        run.table('smear_r', [{'preset': name, 'r': row['r'], 'value': row['value'], 'residual': row['residual']}
                              for row in fit.table])
        run.fit(f"{name}/asymptote_functional", limit)

        if not (isinstance(p, SeparableProfile) and p.is_isotropic()):
            logger.info('smear: %s has angular dependence; g_R smearing runs on spherical waves only', name)
            continue
        field = SphericalWave(p)

        errors = [abs(smear_g(field, scaled_g(GKernel(), R), f, n_theta=4) - limit) for R in R_list]
        decreasing = all(b < a for a, b in zip(errors, errors[1:]))
        run.check(f"{name}/smear-g-monotone", errors[-1], decreasing, DERIVED, preset=name)
        run.check(f"{name}/smear-g", errors[-1], errors[-1] <= run.tol(1e-5), DERIVED, reference=0.0,
                  error=errors[-1], tolerance=run.tol(1e-5), preset=name, R=R_list[-1])
        run.table('smear_g', [{'preset': name, 'R': R, 'error': e} for R, e in zip(R_list, errors)])

        decay = outgoing_derivative_decay(field, SmearKernel(f), R_list, n_theta=4, threads=run.threads)
        run.compare(f"{name}/derivative-decay", decay.exponent, -1.0, PAPER, 0.05, preset=name)
        run.fit(f"{name}/derivative_decay", decay.exponent)

        residual = frame_derivative_residual(field, scaled_g(GKernel(), frame_R), f, 0, n_theta=8)
        run.check(f"{name}/frame-derivative", residual, residual <= run.tol(1e-4), DERIVED, reference=0.0,
                  error=residual, tolerance=run.tol(1e-4), preset=name, R=frame_R)
        frame_order(name, field)

        residual = deriv_identity_residual(field, 30.0, f, h=1e-2, n_theta=4)
        run.check(f"{name}/derivative-identity", residual, residual <= run.tol(1e-6), DERIVED, reference=0.0,
                  error=residual, tolerance=run.tol(1e-6), preset=name, r=30.0)


@smearing_bp.experiment('invariance', presets=('tanh', 'gauss_bump'), lists={'rapidity': [0.25, 0.5, 1.0]},
                        grid={'n_theta': 48}, options={'axis': [0.0, 1.0, 1.0], 'dipole': 0.3})
def invariance(run):
    """The asymptote functional in a boosted frame equals its rest-frame value."""
    n_theta = run.order('n_theta')
    axis = run.option('axis')
    f = smearing_profile(angular=dipole_angular(float(run.option('dipole')), (1.0, 0.0, 0.0)))

    for name in run.presets:
        p = run.preset(name).profile
        for rapidity in run.values('rapidity'):
            result = lorentz_invariance_check(p, f, Boost(rapidity, axis), n_theta=n_theta)
            run.compare(f"{name}/rapidity{rapidity:g}", result.value_boosted, result.value_rest, PAPER,
                        run.tol(1e-4), preset=name, rapidity=rapidity, axis=list(axis))


@smearing_bp.experiment('momentum-check', presets=('gauss_bump',), lists={'R': [20.0, 40.0, 80.0, 160.0]},
                        grid={'n_theta': 8}, options={'position': True, 's_max': 2048.0, 'points': 2 ** 18})
def momentum_check(run):
    """Momentum-side smearing against the lightcone-sheet formula and the position-side split field."""
    n_theta = run.order('n_theta')
    R_list = sorted(run.values('R'))
    f = smearing_profile()
    g = GKernel()

    for name in run.presets:
        p = run.preset(name).profile
        c = MomentumProfile(p)
        plus = momentum_limit(c, f, 1, n_theta=n_theta)
        minus = momentum_limit(c, f, -1, n_theta=n_theta)
        run.compare(f"{name}/both-signs", plus + minus, asymptote_functional(p, f), DERIVED, run.tol(1e-6),
                    preset=name)

        positive = frequency_split(p, 1, s_max=256.0, points=2 ** 16)
        run.compare(f"{name}/split-limit", asymptote_functional(positive, f, n_theta=n_theta), plus, PAPER,
                    run.tol(1e-4), preset=name)

        wrong = [abs(wrong_term(c, scaled_g(g, R), f, n_theta=n_theta)) for R in R_list]
        exponent = scaling_exponent(R_list, wrong)
        run.compare(f"{name}/wrong-term-decay", exponent, -1.0, DERIVED, 0.1, preset=name)
        run.fit(f"{name}/wrong_term_exponent", exponent)
        rows = [{'preset': name, 'R': R, 'wrong_term': w} for R, w in zip(R_list, wrong)]

        if run.option('position'):
            fine = frequency_split(p, 1, s_max=float(run.option('s_max')), points=int(run.option('points')))
            gaps = []
            for R in R_list:
                g_R = scaled_g(g, R)
                position = smear_g(fine, g_R, f, nodes=32, threads=run.threads, n_theta=n_theta, n_phi=32)
                gaps.append(abs(position - momentum_side_smear(c, g_R, f, n_theta=n_theta)))
            gamma = -scaling_exponent(R_list, gaps)
            run.check(f"{name}/position-gap-decay", gamma, gamma > 0.2, PAPER, reference=0.2, preset=name)
            run.fit(f"{name}/position_gap_exponent", gamma)
            for row, gap in zip(rows, gaps):
                row['position_gap'] = gap
        run.table('momentum', rows)
        run.fit(f"{name}/sheet_limit", plus)

