import numpy as np
from scipy import stats

from nullasym.exceptions import InvalidInputError
from nullasym.models.grid_function import GridFunction4
from nullasym.models.profiles import cap_angular, dipole_angular, smearing_profile
from nullasym.models.report import DERIVED, PAPER, TRIVIAL
from nullasym.experiments import ExperimentGroup
from nullasym.physics.norms import (
    commutator_scaling,
    holder_check,
    limit_reference,
    lp1_norm,
    random_cases,
    tail_lemma_scan,
    young_check,
)
from nullasym.physics.sphere_ft import (
    component_function,
    constant_function,
    expansion_terms,
    measure_transform_check,
    position_bound,
    random_band_limited,
    remainder_position,
)
from nullasym.utils.helpers import random_unit_vectors

analysis_bp = ExperimentGroup('analysis')

SPHERE_CHECKS = ('identity', 'bound', 'cap')
NORM_CHECKS = ('lp1', 'holder', 'young', 'taillemma', 'thm3')


def _selected(run, known):
    check = run.option('check')
    if check == 'all':
        return known
    if check not in known:
        raise InvalidInputError(f"unknown {run.experiment.name} check {check!r}; known: all, {', '.join(known)}")
    return (check,)


def _sphere_identity(run, functions):
    directions = random_unit_vectors(run.rng, int(run.option('directions')))
    for index, f in enumerate(functions):
        for size in run.values('q'):
            for d, direction in enumerate(directions):
                residual = expansion_terms(f, size * direction).residual
                run.check(f"f{index}/q{size:g}/d{d}", residual, residual <= run.tol(1e-6), PAPER,
                          reference=0.0, error=residual, tolerance=run.tol(1e-6), function=f.name,
                          q=(size * direction).tolist())

    check = measure_transform_check(smearing_profile(angular=dipole_angular(0.5)), x0=20.5, r=20.0,
                                    p=[0.3, 0.2, 0.9])
    run.check('measure-transform', check.residual, check.residual <= run.tol(1e-7), DERIVED, reference=0.0,
              error=check.residual, tolerance=run.tol(1e-7))


def _sphere_bound(run, functions):
    count = int(run.option('positions'))
    radii = np.geomspace(1.001, 20.0, count)
    points = random_unit_vectors(run.rng, count) * radii[:, None]
    for index, f in enumerate(functions[1:3], start=1):
        results = [position_bound(f, z) for z in points]
        violations = sum(not result.ok for result in results)
        run.check(f"f{index}/position-bound", violations, violations == 0, PAPER, reference=0,
                  function=f.name, points=count)
        run.table('position', [{'function': f.name, 'z': float(np.linalg.norm(z)), 'value': r.value,
                                'bound': r.bound} for z, r in zip(points, results)])


def _sphere_cap(run, functions):
    f = functions[1]
    for size in (1.01, 1.5, 3.0, 25.0):
        z = size * random_unit_vectors(run.rng, 1)[0]
        value = remainder_position(f, z)
        # f = n̂₃: the cap integral of Δ_S f is 2π ẑ₃ / |z⃗|² after the prefactor
        expected = 2.0 * np.pi * z[2] / size ** 3
        run.compare(f"cap/z{size:g}", value, expected, DERIVED, run.tol(1e-10), z=z.tolist())

    for index, g in enumerate(functions):
        inside = [remainder_position(g, 0.5 * z) for z in random_unit_vectors(run.rng, 10)]
        run.check(f"f{index}/inside-ball", max(abs(v) for v in inside), all(v == 0 for v in inside), TRIVIAL,
                  reference=0.0, function=g.name)


@analysis_bp.experiment('sphere-ft', lists={'q': [0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0]},
                        options={'check': 'all', 'directions': 3, 'positions': 100})
def sphere_ft(run):
    """Boundary expansion of the sphere transform and the position-space remainder bound."""
    selected = _selected(run, SPHERE_CHECKS)
    functions = [constant_function(), component_function(), random_band_limited(run.rng),
                 random_band_limited(run.rng, l_max=3, terms=3)]
    if 'identity' in selected:
        _sphere_identity(run, functions)
    if 'bound' in selected:
        _sphere_bound(run, functions)
    if 'cap' in selected:
        _sphere_cap(run, functions)


def _gaussian(x):
    return np.exp(-0.5 * np.sum(x * x, axis=-1))


def _unit_box(x):
    return np.all((x >= 0.0) & (x <= 1.0), axis=-1).astype(float)


def _gaussian_grid():
    return GridFunction4.sample(_gaussian, [-7.0] * 4, [7.0] * 4, (28,) * 4, envelope=_gaussian, name='gauss')


def _random_checks(run, kinds):
    """Randomized cases per kind; each kind gets total // share of the case budget."""
    total = int(run.option('cases'))
    for kind, share in kinds.items():
        count = max(1, total // share)
        for index, case in enumerate(random_cases(run.rng, count, kind)):
            lhs, rhs = case.run()
            run.check(f"{kind}/{index}", lhs, lhs <= rhs * (1.0 + 1e-10), PAPER, reference=rhs,
                      kind=kind, exponents=list(case.exponents))


def _lp1(run):
    box = GridFunction4.sample(_unit_box, [-1.0] * 4, [2.0] * 4, (24,) * 4, name='box')
    gauss = _gaussian_grid()
    for p in (1.0, 2.0, 3.0):
        run.compare(f"lp1/box/p{p:g}", lp1_norm(box, p), 1.0, DERIVED, run.tol(1e-10), p=p)
        expected = np.sqrt(2 * np.pi) * (2 * np.pi / p) ** (1.5 / p)
        run.compare(f"lp1/gauss/p{p:g}", lp1_norm(gauss, p), expected, DERIVED, run.tol(1e-6),
                    relative=True, p=p)

    for index, case in enumerate(random_cases(run.rng, 10, 'young')):
        rho, sigma = case.first, case.second
        scale = complex(run.rng.normal(), run.rng.normal())
        for p in (1.0, 2.0):
            homogeneity = abs(lp1_norm(scale * rho, p) / (abs(scale) * lp1_norm(rho, p)) - 1.0)
            run.check(f"lp1/homogeneity/{index}/p{p:g}", homogeneity, homogeneity <= 1e-10, TRIVIAL,
                      reference=0.0, error=homogeneity, tolerance=1e-10, p=p)
            lhs, rhs = lp1_norm(rho + sigma, p), lp1_norm(rho, p) + lp1_norm(sigma, p)
            run.check(f"lp1/triangle/{index}/p{p:g}", lhs, lhs <= rhs * (1.0 + 1e-10), TRIVIAL,
                      reference=rhs, p=p)


def _holder(run):
    _random_checks(run, {'holder': 3, 'holder_time': 6})
    rho = GridFunction4.sample(_gaussian, [-7.0] * 4, [7.0] * 4, (28,) * 4, name='gauss')
    lhs, rhs = holder_check(_gaussian, rho, 2.0)
    run.check('holder/equality', lhs / rhs, 1 - 1e-3 <= lhs / rhs <= 1 + 1e-9, DERIVED, reference=1.0)
    lhs, rhs = holder_check(lambda t: np.exp(-0.5 * t * t), rho, 2.0, kind='time')
    run.check('holder_time/equality', lhs / rhs, 1 - 1e-3 <= lhs / rhs <= 1 + 1e-9, DERIVED, reference=1.0)


def _young(run):
    _random_checks(run, {'young': 3, 'young13': 6})
    box = GridFunction4.sample(_unit_box, [-0.5] * 4, [1.5] * 4, (8,) * 4, name='box')
    lhs, rhs = young_check(box, box, 1.0, 1.0, 1.0)
    run.check('young/equality', lhs / rhs, 1 - 1e-3 <= lhs / rhs <= 1 + 1e-9, DERIVED, reference=1.0)


def _tail(run):
    S_values = run.values('S')

    def power_tail(eps):
        return lambda s: (1.0 + np.abs(s)) ** (-1.0 - eps)

    for eps in (1.0, 3.0):
        scan = tail_lemma_scan(power_tail(eps), power_tail(eps), S_values, eps)
        scaled = [b.lhs * (1.0 + b.S) ** eps for b in scan.bounds]
        tau = stats.kendalltau(S_values, scaled)[0] if len(S_values) > 1 else float('nan')
        run.fit(f"tail/eps{eps:g}/kendall_tau", tau)
        run.fit(f"tail/eps{eps:g}/exponent", scan.exponent)
        run.table('tail', [{'eps': eps, 'S': b.S, 'lhs': b.lhs, 'reference': b.ref} for b in scan.bounds])
        if eps > 2.0:
            run.check(f"tail/eps{eps:g}/exponent", scan.exponent, scan.exponent >= eps - 0.1, PAPER,
                      reference=eps - 0.1, eps=eps)
        else:
            worst = max(b.lhs / b.ref for b in scan.bounds)
            run.check(f"tail/eps{eps:g}/bounded", worst, worst <= 3.0, PAPER, reference=3.0, eps=eps)


def _commutator(run):
    r_values = sorted(run.values('r'))
    f = smearing_profile()

    fit = commutator_scaling(f, r_values, 1.5, 'sub2', threads=run.threads)
    run.compare('commutator/kappa1.5', fit.exponent, 0.5, PAPER, 0.1, kappa=1.5)
    run.table('commutator', [{'kappa': 1.5, 'r': r, 'value': v} for r, v in zip(fit.r, fit.values)])

    fit = commutator_scaling(f, r_values, 3.0, 'super2', threads=run.threads)
    ceiling = 0.75 * np.pi * limit_reference(f)
    run.check('commutator/kappa3', max(fit.values), max(fit.values) <= ceiling, PAPER, reference=ceiling,
              kappa=3.0)
    run.fit('commutator/kappa3/exponent', fit.exponent)
    run.table('commutator', [{'kappa': 3.0, 'r': r, 'value': v} for r, v in zip(fit.r, fit.values)])

    north = smearing_profile(angular=cap_angular((0.0, 0.0, 1.0)))
    south = smearing_profile(angular=cap_angular((0.0, 0.0, -1.0)))
    fit = commutator_scaling(north, r_values, 3.0, 'disjoint', south, threads=run.threads)
    # min(κ, ε) - 2 with κ = ε = 3, less 0.2
    run.check('commutator/disjoint', -fit.exponent, -fit.exponent >= 0.8, PAPER, reference=0.8, kappa=3.0)
    run.table('commutator', [{'kappa': 'disjoint', 'r': r, 'value': v} for r, v in zip(fit.r, fit.values)])


@analysis_bp.experiment('norms', lists={'S': [10.0, 20.0, 40.0, 80.0], 'r': [10.0, 20.0, 40.0, 80.0]},
                        options={'check': 'all', 'cases': 150})
def norms(run):
    """L^{p,1} norms, randomized Hölder and Young checks, the tail lemma and commutator-integral scaling."""
    selected = _selected(run, NORM_CHECKS)
    for name, check in (('lp1', _lp1), ('holder', _holder), ('young', _young), ('taillemma', _tail),
                        ('thm3', _commutator)):
        if name in selected:
            check(run)
