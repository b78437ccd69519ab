"""Charge-susceptibility self-energy of the cavity mode.

The four components F', F'', F^<, F^> at external frequency w are
frequency-convolution integrals of Green's-function products over w',
evaluated by adaptive Gauss-Kronrod quadrature on [-cutoff, cutoff] with
the initial partition seeded at the lead chemical potentials (+- a few
k_B T) and the dot eigenvalues, each shifted by +-w/2.

All values are per replica; the replica count enters downstream as a pure
multiplier.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import GainMedium, LeadSet
from .quadrature import IntegrationError, adaptive_gauss_kronrod

# Residual real/imaginary parts that the trace structure says must vanish
# are checked against this relative bound instead of being discarded.
RESIDUE_REL = 1e-10


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and integration window for the convolution integrals.

    cutoff is the half-width of the integration window in ueV; None means
    "derive from the physical scales via default_cutoff".
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    cutoff: float | None = None
    max_intervals: int = 4096

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("abs_tol and rel_tol must be > 0")
        if self.cutoff is not None and not (np.isfinite(self.cutoff)
                                            and self.cutoff > 0):
            raise ValueError(f"cutoff must be > 0, got {self.cutoff}")
        if self.max_intervals < 4:
            raise ValueError("max_intervals must be at least 4")


@dataclass(frozen=True)
class SusceptibilityPoint:
    """Per-replica self-energy components at one frequency (ueV).

    f_real and f_imag are the reactive and dissipative parts of the
    retarded component; f_lesser/f_greater are purely imaginary with
    Im <= 0, so the emission weight i*f_lesser is >= 0.
    """

    omega: float
    f_real: float
    f_imag: float
    f_lesser: complex
    f_greater: complex


def default_cutoff(leads: LeadSet, medium: GainMedium):
    """Integration half-width covering bias, thermal and spectral scales.

    max(|mu_L|, |mu_R|) + 40 k_BT + 20 (||H|| + Gamma_L + Gamma_R),
    clamped below at 1 ueV; the integrands decay like 1/w'^3 outside.
    """
    spectral = np.linalg.norm(medium.hamiltonian, 2)
    lam = (max(abs(leads.mu_left), abs(leads.mu_right))
           + 40.0 * leads.temperature
           + 20.0 * (spectral + leads.gamma_left + leads.gamma_right))
    return max(lam, 1.0)


def _seed_points(omega, leads, medium, cutoff):
    eigs = np.linalg.eigvalsh(medium.hamiltonian)
    kt = leads.temperature
    feats = [leads.mu_left, leads.mu_left - 4 * kt, leads.mu_left + 4 * kt,
             leads.mu_right, leads.mu_right - 4 * kt, leads.mu_right + 4 * kt]
    feats.extend(eigs)
    feats = np.asarray(feats)
    seeds = np.concatenate((feats - 0.5 * omega, feats + 0.5 * omega, [0.0]))
    return np.unique(seeds[(seeds > -cutoff) & (seeds < cutoff)])


def _raw_integrals(omega, leads, medium, quad):
    """The four trace integrals without prefactors."""
    if quad.cutoff is not None:
        cutoff = quad.cutoff
    else:
        # the integrand's features sit at the physical scales shifted by
        # +-omega/2, so the auto window must grow with the external frequency
        cutoff = default_cutoff(leads, medium) + 0.5 * abs(omega)
    seeds = _seed_points(omega, leads, medium, cutoff)
    ham = medium.hamiltonian
    coupling = medium.coupling
    gl, gr = leads.gamma_left, leads.gamma_right
    ls, rs = medium.left_site, medium.right_site
    mul, mur = leads.mu_left, leads.mu_right
    beta = leads.beta

    def f(nodes):
        return kernels.integrand_batch(nodes, omega, ham, coupling, gl, gr,
                                       ls, rs, mul, mur, beta)

    try:
        vals, _ = adaptive_gauss_kronrod(
            f, -cutoff, cutoff, seeds=seeds, abs_tol=quad.abs_tol,
            rel_tol=quad.rel_tol, max_intervals=quad.max_intervals)
    except IntegrationError as exc:
        raise IntegrationError(
            f"susceptibility quadrature failed at omega = {omega:g}: {exc}",
            error_estimate=exc.error_estimate) from exc
    return vals


def _check_residue(name, residue, magnitude, quad, omega):
    bound = max(RESIDUE_REL * magnitude, quad.abs_tol)
    if abs(residue) > bound:
        raise ArithmeticError(
            f"{name} at omega = {omega:g} has a spurious residue "
            f"{residue:g} exceeding {bound:g}; the trace structure demands "
            "it vanish")


def susceptibility_point(omega, leads: LeadSet, medium: GainMedium,
                         quad: QuadratureConfig | None = None):
    """All four per-replica self-energy components at one frequency."""
    if not np.isfinite(omega):
        raise ValueError(f"omega must be finite, got {omega}")
    if quad is None:
        quad = QuadratureConfig()
    v = _raw_integrals(omega, leads, medium, quad)
    f_real_c = -1j * v[0] / (8.0 * np.pi)
    f_imag_c = v[1] / (8.0 * np.pi)
    f_lesser = -1j * v[2] / (2.0 * np.pi)
    f_greater = -1j * v[3] / (2.0 * np.pi)
    _check_residue("F'", f_real_c.imag, abs(f_real_c), quad, omega)
    _check_residue("F''", f_imag_c.imag, abs(f_imag_c), quad, omega)
    _check_residue("F^<", f_lesser.real, abs(f_lesser), quad, omega)
    _check_residue("F^>", f_greater.real, abs(f_greater), quad, omega)
    return SusceptibilityPoint(omega=float(omega), f_real=f_real_c.real,
                               f_imag=f_imag_c.real, f_lesser=complex(f_lesser),
                               f_greater=complex(f_greater))


def f_real_imag(omega, leads, medium, quad=None):
    """(F', F'') per replica: reactive and dissipative response parts."""
    pt = susceptibility_point(omega, leads, medium, quad)
    return pt.f_real, pt.f_imag


def f_lesser_greater(omega, leads, medium, quad=None):
    """(F^<, F^>) per replica: emission and absorption components."""
    pt = susceptibility_point(omega, leads, medium, quad)
    return pt.f_lesser, pt.f_greater


def susceptibility_grid(omegas, leads, medium, quad=None, workers=None):
    """Pointwise susceptibility on an ordered frequency grid.

    Evaluation may parallelize over frequencies (workers > 1); each point
    is computed independently, so the result does not depend on the
    schedule.  Integration failures carry the offending omega.
    """
    omegas = [float(w) for w in omegas]
    if any(not np.isfinite(w) for w in omegas):
        raise ValueError("all grid frequencies must be finite")
    if any(b < a for a, b in zip(omegas, omegas[1:])):
        raise ValueError("grid frequencies must be sorted ascending")
    if not omegas:
        return []
    if workers is None or workers <= 1 or len(omegas) < 2:
        return [susceptibility_point(w, leads, medium, quad) for w in omegas]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(susceptibility_point, w, leads, medium, quad)
                   for w in omegas]
        return [f.result() for f in futures]
