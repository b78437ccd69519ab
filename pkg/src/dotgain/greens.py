"""Noninteracting Green's functions of the dot network with wide-band leads.

Retarded/advanced functions come from direct inversion of
(omega*I - H - Sigma^r); lesser/greater follow the Keldysh equation
G^{<,>} = G^r Sigma^{<,>} G^a.  The wide-band lead self-energies are
frequency-independent in magnitude and purely imaginary (the real level
shift is dropped).
"""

from dataclasses import dataclass

import numpy as np

from .model import GainMedium, LeadSet


class SingularityError(ArithmeticError):
    """omega*I - H - Sigma^r is singular (only possible with Gamma = 0 when
    omega hits a dot eigenvalue)."""


def fermi(omega, mu, beta):
    """Fermi-Dirac occupation 1/(exp(beta*(omega-mu)) + 1).

    Overflow-safe: the argument is clamped to +-700 before exponentiation,
    which pins the result to exactly 0/1 far outside the thermal window.
    """
    x = np.asarray(beta * (np.asarray(omega, dtype=float) - mu))
    out = 1.0 / (1.0 + np.exp(np.clip(x, -700.0, 700.0)))
    out = np.where(x > 700.0, 0.0, out)
    out = np.where(x < -700.0, 1.0, out)
    if np.ndim(omega) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class LeadSelfEnergySet:
    """Diagonal wide-band lead self-energies at one frequency (all M x M)."""

    retarded: np.ndarray
    advanced: np.ndarray
    lesser: np.ndarray
    greater: np.ndarray


@dataclass(frozen=True)
class GreenSet:
    """The five Green's-function matrices of the dot network at one
    frequency (retarded, advanced, lesser, greater, keldysh)."""

    omega: float
    retarded: np.ndarray
    advanced: np.ndarray
    lesser: np.ndarray
    greater: np.ndarray
    keldysh: np.ndarray


def lead_self_energy(omega, leads: LeadSet, medium: GainMedium):
    """Wide-band lead self-energies; the two leads add on the diagonal.

    At the attachment site of lead alpha: Sigma^r = -i*Gamma_a/2,
    Sigma^< = +i*f_a(omega)*Gamma_a, Sigma^> = -i*(1-f_a(omega))*Gamma_a.
    For a single-site network both leads pile onto the same entry.
    """
    m = medium.n_sites
    retarded = np.zeros((m, m), dtype=complex)
    lesser = np.zeros((m, m), dtype=complex)
    greater = np.zeros((m, m), dtype=complex)
    beta = leads.beta
    for site, gamma, mu in ((medium.left_site, leads.gamma_left, leads.mu_left),
                            (medium.right_site, leads.gamma_right, leads.mu_right)):
        f = fermi(omega, mu, beta)
        retarded[site, site] += -0.5j * gamma
        lesser[site, site] += 1j * f * gamma
        greater[site, site] += -1j * (1.0 - f) * gamma
    return LeadSelfEnergySet(retarded=retarded, advanced=-retarded,
                             lesser=lesser, greater=greater)


def green_set(omega, leads: LeadSet, medium: GainMedium):
    """All five Green's functions at a real frequency."""
    if not np.isfinite(omega):
        raise ValueError(f"omega must be finite, got {omega}")
    sigma = lead_self_energy(omega, leads, medium)
    m = medium.n_sites
    a = omega * np.eye(m) - medium.hamiltonian - sigma.retarded
    if leads.gamma_left == 0.0 and leads.gamma_right == 0.0:
        eigs = np.linalg.eigvalsh(medium.hamiltonian)
        gap = np.min(np.abs(eigs - omega))
        if gap <= 1e-12 * max(1.0, np.max(np.abs(eigs))):
            nearest = eigs[np.argmin(np.abs(eigs - omega))]
            raise SingularityError(
                f"omega = {omega:g} hits the dot eigenvalue {nearest:g} "
                "with zero lead broadening")
    try:
        retarded = np.linalg.inv(a)
    except np.linalg.LinAlgError as exc:
        raise SingularityError(
            f"omega*I - H - Sigma^r is singular at omega = {omega:g}") from exc
    advanced = retarded.conj().T
    lesser = retarded @ sigma.lesser @ advanced
    greater = retarded @ sigma.greater @ advanced
    return GreenSet(omega=float(omega), retarded=retarded, advanced=advanced,
                    lesser=lesser, greater=greater, keldysh=lesser + greater)


def spectral_function(omega, leads: LeadSet, medium: GainMedium):
    """A(omega) = i (G^r - G^a); Hermitian and positive semidefinite."""
    gs = green_set(omega, leads, medium)
    return 1j * (gs.retarded - gs.advanced)
