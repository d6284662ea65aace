from math import factorial

import numpy as np

from nullasym.models.profiles import GKernel, cap_angular, constant_angular, dipole_angular
from nullasym.models.report import DERIVED, PAPER, TRIVIAL
from nullasym.models.wavefunction import MassSpreadWavefunction
from nullasym.experiments import ExperimentGroup
from nullasym.physics.fock_free import (
    asymptotic_one_particle,
    derivative_kernel_identity,
    derivative_kernel_scan,
    eta_family_limit,
    fock_norm,
    gaussian_mass_spread,
    gaussian_wavefunction,
    inner_product,
    lightcone_limit,
    one_particle_scan,
    phi_series_bound,
    scattering_limit_oracle,
    scattering_overlap,
    scattering_wick_oracle,
    spectral_condition_scan,
    third_derivative_smearing,
    two_particle_scaling,
    weyl_vacuum_coefficient,
)

fock_bp = ExperimentGroup('fock')

# (J, J) of the unit gaussian exp(-ω²)
GAUSS_JJ = 1.0 / (16.0 * np.pi ** 2)


@fock_bp.experiment('fock-spectral', lists={'mu': [0.4, 0.2, 0.1, 0.05], 'mu_min': [1e-2, 1e-3, 1e-4]},
                    options={'sigma': 10.0})
def fock_spectral(run):
    """Two-particle spectral weight near the sheet and the spectral-condition integral."""
    gauss = gaussian_wavefunction()
    jj = inner_product(gauss, gauss).real
    run.compare('gaussian-norm', jj, GAUSS_JJ, DERIVED, run.tol(1e-6), relative=True)

    for n in range(3):
        run.compare(f"fock-norm/n{n}", fock_norm(gauss, n), factorial(n) * GAUSS_JJ ** n, TRIVIAL, 1e-8,
                    relative=True, n=n)
    run.compare('fock-norm/quadrature', fock_norm(gauss, 2, quadrature=True), fock_norm(gauss, 2), DERIVED,
                run.tol(1e-6), relative=True, n=2)

    wide = gaussian_wavefunction(sigma=float(run.option('sigma')), n_theta=8)
    slope = two_particle_scaling(wide, run.values('mu'))
    run.compare('two-particle-slope', slope.exponent, 2.0, PAPER, 0.05, mu=slope.mu)
    run.fit('two_particle_slope', slope.exponent)
    run.table('two_particle', [{'mu': mu, 'norm_sq': value} for mu, value in zip(slope.mu, slope.values)])

    mu_mins = sorted(run.values('mu_min'), reverse=True)
    scan = spectral_condition_scan(gauss, mu_mins)
    run.check('spectral-condition', scan.spread, scan.spread < 0.02, PAPER, reference=0.02,
              error=scan.spread, tolerance=0.02)
    run.fit('spectral_condition_integral', scan.values[-1])
    run.fit('weyl_vacuum_coefficient', weyl_vacuum_coefficient(jj))
    run.fit('phi_series_bound', phi_series_bound(jj))
    run.table('spectral_condition', [{'mu_min': r.mu_min, 'value': r.value, 'chain_constant': r.chain_constant}
                                     for r in scan.results])


def _sheet_only():
    return MassSpreadWavefunction.from_sheet(gaussian_wavefunction(n_theta=8, nodes=64), m_max=1.0)


def _massive():
    return gaussian_mass_spread(support=(0.8, np.inf), n_theta=8, nodes=64, name='massive')


@fock_bp.experiment('fock-limit', lists={'R': [10.0, 1e3, 1e6], 'R_massive': [10.0, 100.0, 1000.0],
                                         'R_eta': [1e4, 1e8, 1e12], 'eta': [0.25, 0.5, 1.0],
                                         'h': [0.4, 0.2, 0.1]})
def fock_limit(run):
    """One-particle limits of the smeared creation part on lightcone and massive data."""
    f = third_derivative_smearing()
    g = GKernel()
    sheet = _sheet_only()
    massive = _massive()

    limit = lightcone_limit(sheet, f)
    for R in run.values('R'):
        distance = (asymptotic_one_particle(sheet, f, g, R) - limit).norm() / limit.norm()
        run.check(f"sheet/R{R:g}", distance, distance <= run.tol(1e-8), PAPER, reference=0.0, error=distance,
                  tolerance=run.tol(1e-8), R=R)

    scan = one_particle_scan(massive, f, sorted(run.values('R_massive')), g)
    decreasing = all(b < a for a, b in zip(scan.off_shell, scan.off_shell[1:]))
    run.check('massive-decay', scan.off_shell[-1], decreasing, PAPER, reference=0.0, R=scan.R)
    run.fit('massive_decay_exponent', scan.exponent)
    run.table('massive', [{'R': R, 'off_shell_norm': v} for R, v in zip(scan.R, scan.off_shell)])

    report = eta_family_limit(massive + sheet, f, g, run.values('eta'), sorted(run.values('R_eta')),
                              tol=run.tol(1e-5))
    run.check('eta-agreement', report.agreement, report.agreement <= run.tol(1e-5), PAPER, reference=0.0,
              error=report.agreement, tolerance=run.tol(1e-5))
    for eta, passed in report.passed.items():
        scan = report.scans[eta]
        run.check(f"eta{eta:g}/limit", scan.distances[-1] / report.limit_norm, passed, PAPER, reference=0.0,
                  eta=eta, R=scan.R[-1])
        run.table('eta', [{'eta': eta, 'R': R, 'distance': d} for R, d in zip(scan.R, scan.distances)])

    identity = derivative_kernel_identity(g, 30.0, 1e-3)
    run.check('derivative-kernel', identity, identity <= run.tol(1e-6), DERIVED, reference=0.0, error=identity,
              tolerance=run.tol(1e-6), R=30.0)
    steps = run.values('h')
    derivative = derivative_kernel_scan(g, 30.0, steps)
    run.compare('derivative-kernel-order', derivative.order, 2.0, DERIVED, 0.2, R=30.0)
    run.table('derivative_kernel', [{'step': h, 'residual': r} for h, r in zip(derivative.steps,
                                                                                derivative.residuals)])


@fock_bp.experiment('fock-scatter', grid={'n_theta': 4, 'nodes': 16}, options={'R_limit': [1e3, 1e4, 1e5]})
def fock_scatter(run):
    """Two-particle scattering overlaps against Wick contraction of the one-particle limits."""
    n_theta, nodes = run.order('n_theta'), run.order('nodes')

    def packet(angular=None, amplitude=1.0):
        return gaussian_wavefunction(1.0, amplitude, angular, n_theta=n_theta, nodes=nodes)

    f = third_derivative_smearing()
    upper = third_derivative_smearing(angular=cap_angular([0.0, 0.0, 1.0], np.pi / 2))
    north = third_derivative_smearing(angular=cap_angular([0.0, 0.0, 1.0]))
    south = third_derivative_smearing(angular=cap_angular([0.0, 0.0, -1.0]))
    pairs = {
        'dipole-pair': (packet(dipole_angular(0.4)), f, packet(dipole_angular(0.8, (0.0, 1.0, 0.0)), 0.6), upper),
        'self': (packet(dipole_angular(0.4)), f, packet(dipole_angular(0.4)), f),
        'isotropic': (packet(), f, packet(amplitude=0.5j), f),
    }
    for label, (psi1, f1, psi2, f2) in pairs.items():
        overlap = scattering_overlap(psi1, f1, psi2, f2)
        oracle = scattering_wick_oracle(psi1, f1, psi2, f2)
        run.compare(label, overlap, oracle, DERIVED, run.tol(1e-6), relative=True)

    def spread(angular=None, amplitude=1.0):
        angular = constant_angular(1.0) if angular is None else angular

        def func(omega, n, m):
            return amplitude * np.exp(-omega ** 2) * angular(n)
        sheet = MassSpreadWavefunction.sample(func, support=(0.0, 0.0), m_max=1.0, n_theta=n_theta, nodes=nodes)
        massive = MassSpreadWavefunction.sample(func, support=(0.8, np.inf), m_max=1.0, n_theta=n_theta,
                                                nodes=nodes)
        return sheet + massive

    R_list = [float(R) for R in run.option('R_limit')]
    off_shell = {
        'dipole-pair': (spread(dipole_angular(0.4)), f, spread(dipole_angular(0.8, (0.0, 1.0, 0.0)), 0.6), upper),
        'self': (spread(dipole_angular(0.4)), f, spread(dipole_angular(0.4)), f),
    }
    for label, (psi1, f1, psi2, f2) in off_shell.items():
        limit = scattering_limit_oracle(psi1, f1, psi2, f2, R_list)
        run.compare(f"R-limit/{label}", scattering_overlap(psi1, f1, psi2, f2), limit.limit, DERIVED,
                    run.tol(1e-6), relative=True)
        run.table('r_limit', [dict(pair=label, **row) for row in limit.table])

    psi = packet()
    overlap = scattering_overlap(psi, north, psi, south)
    run.check('disjoint-caps', abs(overlap), overlap == 0, TRIVIAL, reference=0.0)
    spread_psi = spread()
    limit = scattering_limit_oracle(spread_psi, north, spread_psi, south, R_list).limit
    run.check('R-limit/disjoint-caps', abs(limit), abs(limit) <= 1e-15, TRIVIAL, reference=0.0)
    self_overlap = scattering_overlap(psi, f, psi, f)
    run.check('positivity', self_overlap, self_overlap.real > 0, TRIVIAL, reference=0.0)
