"""Built-in invariant suite, runnable from the CLI (`dotgain selfcheck`).

Runs the structural identities of every module at three canonical
parameter sets (equilibrium DQD, the biased gain-regime DQD, and a
resonant three-dot cascade) and reports one machine-readable line per
check: name, measured value, bound, verdict.

`corrupt` deliberately mis-scales one internal quantity so the mutation
test can verify the checks actually bite.
"""

from dataclasses import dataclass

import numpy as np

from .cavity import cavity_response, sum_rule_check, threshold_margin
from .greens import fermi, green_set, spectral_function
from .model import (CavityParams, build_cascade, build_ndqd, mhz_to_uev,
                    symmetric_bias_leads)
from .susceptibility import QuadratureConfig, SusceptibilityPoint, \
    susceptibility_grid, susceptibility_point

G_FIG2 = mhz_to_uev(50.0)
CAVITY_FIG2 = CavityParams(omega_c=mhz_to_uev(7880.5), kappa=mhz_to_uev(3.15))


def _canonical_sets():
    dqd = build_ndqd(7.0, 16.4, G_FIG2, 4)
    cascade = build_cascade(3, 22.0, 16.4, G_FIG2)
    return [
        ("equilibrium", dqd, symmetric_bias_leads(2.6, 0.0, 0.69)),
        ("fig2", dqd, symmetric_bias_leads(2.6, 250.0, 0.69)),
        ("cascade_m3", cascade, symmetric_bias_leads(2.6, 250.0, 0.69)),
    ]


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    bound: float
    passed: bool

    def line(self):
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{verdict} {self.name} measured={self.measured:.6e} "
                f"bound={self.bound:.6e}")


def _rel(a, b):
    scale = max(abs(a), abs(b), 1e-300)
    return abs(a - b) / scale


def _green_checks(tag, medium, leads, results):
    eigs = np.linalg.eigvalsh(medium.hamiltonian)
    span = max(np.max(np.abs(eigs)), 1.0)
    lattice = np.linspace(-2 * span - 10, 2 * span + 10, 41)
    dev_dagger = dev_keldysh = dev_psd = dev_fd = 0.0
    for w in lattice:
        gs = green_set(w, leads, medium)
        norm = np.linalg.norm(gs.retarded)
        dev_dagger = max(dev_dagger,
                         np.linalg.norm(gs.advanced - gs.retarded.conj().T)
                         / norm)
        lhs = gs.greater - gs.lesser
        rhs = gs.retarded - gs.advanced
        dev_keldysh = max(dev_keldysh,
                          np.linalg.norm(lhs - rhs) / max(np.linalg.norm(rhs),
                                                          1e-300))
        a = spectral_function(w, leads, medium)
        # -i G^< and +i G^> are the occupied/empty spectral weights
        for mat in (-1j * gs.lesser, 1j * gs.greater, a):
            mn = np.linalg.norm(mat)
            if mn > 0:
                low = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))[0]
                dev_psd = max(dev_psd, max(-low, 0.0) / mn)
        if leads.bias == 0.0:
            f = fermi(w, leads.mu_left, leads.beta)
            dev_fd = max(dev_fd,
                         np.max(np.abs(gs.lesser - 1j * f * a))
                         / max(np.max(np.abs(a)), 1e-300))
    results.append(CheckResult(f"green_dagger[{tag}]", dev_dagger, 1e-12,
                               dev_dagger <= 1e-12))
    results.append(CheckResult(f"green_keldysh_identity[{tag}]", dev_keldysh,
                               1e-12, dev_keldysh <= 1e-12))
    results.append(CheckResult(f"green_psd[{tag}]", dev_psd, 1e-12,
                               dev_psd <= 1e-12))
    if leads.bias == 0.0:
        results.append(CheckResult(f"green_fluct_diss[{tag}]", dev_fd, 1e-10,
                                   dev_fd <= 1e-10))
    w_big = 1e6
    gs = green_set(w_big, leads, medium)
    dev = abs(np.linalg.norm(gs.retarded, 2) * w_big - 1.0)
    results.append(CheckResult(f"green_highfreq_decay[{tag}]", dev, 1e-4,
                               dev <= 1e-4))


def _susc_checks(tag, medium, leads, cavity, results, corrupt=None):
    quad = QuadratureConfig()
    wc = cavity.omega_c
    kt = leads.temperature

    def point(w):
        pt = susceptibility_point(w, leads, medium, quad)
        if corrupt == "lesser_greater_prefactor":
            pt = SusceptibilityPoint(omega=pt.omega, f_real=pt.f_real,
                                     f_imag=pt.f_imag,
                                     f_lesser=2.0 * pt.f_lesser,
                                     f_greater=2.0 * pt.f_greater)
        return pt

    # cross-route consistency F'' = (F^> - F^<) / 2i
    dev_cross = 0.0
    for w in (0.3 * wc, wc, 1.7 * wc):
        pt = point(w)
        other = ((pt.f_greater - pt.f_lesser) / 2j).real
        dev_cross = max(dev_cross, _rel(pt.f_imag, other))
    results.append(CheckResult(f"susc_cross_route[{tag}]", dev_cross, 1e-6,
                               dev_cross <= 1e-6))

    # mirror identity F^<(-w) = F^>(w)
    dev_mirror = 0.0
    for w in (0.5 * wc, wc):
        a = point(-w).f_lesser
        b = point(w).f_greater
        dev_mirror = max(dev_mirror, abs(a - b) / max(abs(a), abs(b), 1e-300))
    results.append(CheckResult(f"susc_mirror[{tag}]", dev_mirror, 1e-8,
                               dev_mirror <= 1e-8))

    # parity of the retarded components
    pa = point(wc)
    pb = point(-wc)
    dev_parity = max(_rel(pa.f_real, pb.f_real), _rel(pa.f_imag, -pb.f_imag))
    results.append(CheckResult(f"susc_parity[{tag}]", dev_parity, 1e-6,
                               dev_parity <= 1e-6))

    # exact g^2 scaling: doubling every coupling multiplies F by 4
    from .model import GainMedium
    doubled = GainMedium(medium.hamiltonian, 2.0 * medium.coupling,
                         medium.left_site, medium.right_site,
                         medium.replicas)
    p1 = susceptibility_point(wc, leads, medium, quad)
    p4 = susceptibility_point(wc, leads, doubled, quad)
    dev_g2 = max(_rel(4 * p1.f_real, p4.f_real),
                 _rel(4 * p1.f_imag, p4.f_imag),
                 abs(4 * p1.f_lesser - p4.f_lesser)
                 / max(abs(p4.f_lesser), 1e-300))
    results.append(CheckResult(f"susc_g2_scaling[{tag}]", dev_g2, 1e-12,
                               dev_g2 <= 1e-12))

    if leads.bias == 0.0:
        # detailed balance F^> = exp(beta w) F^<
        dev_db = 0.0
        for w in (0.25 * kt, kt, 4 * kt, 10 * kt):
            pt = point(w)
            expected = np.exp(leads.beta * w) * pt.f_lesser
            dev_db = max(dev_db, abs(pt.f_greater - expected)
                         / max(abs(pt.f_greater), 1e-300))
        results.append(CheckResult(f"susc_detailed_balance[{tag}]", dev_db,
                                   1e-4, dev_db <= 1e-4))
        # equilibrium medium is dissipative
        worst = min(-point(w).f_imag for w in
                    np.linspace(0.2 * wc, 2.0 * wc, 7))
        results.append(CheckResult(f"susc_equilibrium_dissipative[{tag}]",
                                   worst, 0.0, worst > 0.0))


def _cavity_checks(tag, medium, leads, cavity, results):
    quad = QuadratureConfig()
    n = medium.replicas
    # empty cavity: exact Lorentzian
    zero = SusceptibilityPoint(omega=0.0, f_real=0.0, f_imag=0.0,
                               f_lesser=0j, f_greater=0j)
    dev_lor = 0.0
    from .cavity import transmission
    for w in np.linspace(cavity.omega_c - 5 * cavity.kappa,
                         cavity.omega_c + 5 * cavity.kappa, 21):
        pt = SusceptibilityPoint(omega=w, f_real=0.0, f_imag=0.0,
                                 f_lesser=0j, f_greater=0j)
        got = abs(transmission(w, cavity, pt, n)) ** 2
        expect = cavity.kappa ** 2 / ((w - cavity.omega_c) ** 2
                                      + cavity.kappa ** 2)
        dev_lor = max(dev_lor, _rel(got, expect))
    results.append(CheckResult(f"cavity_empty_lorentzian[{tag}]", dev_lor,
                               1e-14, dev_lor <= 1e-14))

    # below-threshold margin at the cavity frequency
    pts = susceptibility_grid(
        np.linspace(cavity.omega_c - 5 * cavity.kappa,
                    cavity.omega_c + 5 * cavity.kappa, 11),
        leads, medium, quad)
    margin = threshold_margin(cavity, pts, n)
    results.append(CheckResult(f"cavity_threshold_margin[{tag}]", margin,
                               0.0, margin > 0.0))


def _model_checks(results):
    a = build_cascade(2, 7.0, 16.4, G_FIG2)
    b = build_ndqd(7.0, 16.4, G_FIG2, 1)
    dev = max(np.max(np.abs(a.hamiltonian - b.hamiltonian)),
              np.max(np.abs(a.coupling - b.coupling)),
              abs(a.left_site - b.left_site),
              abs(a.right_site - b.right_site))
    results.append(CheckResult("model_cascade_equals_dqd", dev, 0.0,
                               dev == 0.0))
    rt = _rel(mhz_to_uev(1e3) / 4.135667696, 1.0)
    results.append(CheckResult("model_unit_conversion", rt, 1e-12,
                               rt <= 1e-12))


def run_selfcheck(corrupt=None):
    """Execute every check; returns (results, all_passed)."""
    results = []
    _model_checks(results)
    for tag, medium, leads in _canonical_sets():
        _green_checks(tag, medium, leads, results)
        _susc_checks(tag, medium, leads, CAVITY_FIG2, results,
                     corrupt=corrupt)
        if tag != "equilibrium":
            _cavity_checks(tag, medium, leads, CAVITY_FIG2, results)
    return results, all(r.passed for r in results)
