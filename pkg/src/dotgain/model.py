"""Unit conventions and builders for the quantum-dot gain media.

All energies and frequencies are handled internally in ueV with hbar = 1,
so an angular frequency and an energy are the same number.  Quantities
quoted in MHz (cavity frequency, decay rate, light-matter coupling) are
converted through E = h*f.
"""

from dataclasses import dataclass

import numpy as np

# CODATA 2018 Planck constant, expressed in ueV per MHz.
H_UEV_PER_MHZ = 4.135667696e-3
# CODATA 2018 Boltzmann constant, ueV per kelvin.
KB_UEV_PER_K = 86.17333262

# Type alias: energies are plain floats in ueV.
Energy = float


def mhz_to_uev(f):
    """Convert a frequency in MHz to an energy in ueV via E = h*f."""
    f = float(f)
    if not np.isfinite(f):
        raise ValueError(f"frequency must be finite, got {f}")
    return H_UEV_PER_MHZ * f


def uev_to_mhz(e):
    """Inverse of :func:`mhz_to_uev`."""
    e = float(e)
    if not np.isfinite(e):
        raise ValueError(f"energy must be finite, got {e}")
    return e / H_UEV_PER_MHZ


@dataclass(frozen=True)
class LeadSet:
    """Wide-band fermionic reservoirs attached to the dot network.

    gamma_left/gamma_right are the hybridization strengths Gamma (ueV),
    mu_left/mu_right the chemical potentials, temperature is k_B*T (ueV).
    """

    gamma_left: float
    gamma_right: float
    mu_left: float
    mu_right: float
    temperature: float

    def __post_init__(self):
        for name in ("gamma_left", "gamma_right", "mu_left", "mu_right",
                     "temperature"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
        if self.gamma_left < 0 or self.gamma_right < 0:
            raise ValueError("hybridization strengths must be >= 0")
        if self.temperature <= 0:
            raise ValueError("temperature must be > 0 so Fermi functions "
                             "are well-defined")

    @property
    def bias(self):
        return self.mu_left - self.mu_right

    @property
    def beta(self):
        return 1.0 / self.temperature


def symmetric_bias_leads(gamma, bias, temperature):
    """LeadSet with Gamma_L = Gamma_R and mu_{L,R} = +-bias/2."""
    return LeadSet(gamma_left=gamma, gamma_right=gamma,
                   mu_left=0.5 * bias, mu_right=-0.5 * bias,
                   temperature=temperature)


@dataclass(frozen=True)
class CavityParams:
    """Single cavity mode: frequency omega_c and decay rate kappa per port
    (kappa_L = kappa_R = kappa), both in ueV."""

    omega_c: float
    kappa: float

    def __post_init__(self):
        if not (np.isfinite(self.omega_c) and self.omega_c > 0):
            raise ValueError(f"omega_c must be finite and > 0, got {self.omega_c}")
        if not (np.isfinite(self.kappa) and self.kappa > 0):
            raise ValueError(f"kappa must be finite and > 0, got {self.kappa}")


class GainMedium:
    """Electronic gain medium: dot Hamiltonian, light-matter coupling and
    lead attachment, plus the number of identical replicas.

    The replicas enter all observables only as a multiplier on the
    charge-susceptibility self-energy; no enlarged matrix is ever built.
    """

    def __init__(self, hamiltonian, coupling, left_site, right_site, replicas):
        ham = np.array(hamiltonian, dtype=float)
        coup = np.array(coupling, dtype=float)
        if ham.ndim != 2 or ham.shape[0] != ham.shape[1]:
            raise ValueError(f"hamiltonian must be square, got shape {ham.shape}")
        m = ham.shape[0]
        if not np.all(np.isfinite(ham)):
            raise ValueError("hamiltonian entries must be finite")
        asym = np.max(np.abs(ham - ham.T)) if m else 0.0
        scale = max(np.max(np.abs(ham)), 1.0)
        if asym > 1e-14 * scale:
            raise ValueError(f"hamiltonian must be symmetric, asymmetry {asym:g}")
        ham = 0.5 * (ham + ham.T)
        if coup.shape != (m,):
            raise ValueError(f"coupling must have length {m}, got {coup.shape}")
        if not np.all(np.isfinite(coup)):
            raise ValueError("coupling entries must be finite")
        if not (0 <= left_site < m and 0 <= right_site < m):
            raise ValueError("lead sites must index into the dot network")
        if left_site == right_site and m > 1:
            raise ValueError("left and right leads must attach to distinct "
                             "sites unless the network has a single site")
        if replicas < 1:
            raise ValueError(f"replicas must be >= 1, got {replicas}")
        ham.setflags(write=False)
        coup.setflags(write=False)
        self.hamiltonian = ham
        self.coupling = coup
        self.left_site = int(left_site)
        self.right_site = int(right_site)
        self.replicas = int(replicas)

    @property
    def n_sites(self):
        return self.hamiltonian.shape[0]

    def __repr__(self):
        return (f"GainMedium(M={self.n_sites}, left_site={self.left_site}, "
                f"right_site={self.right_site}, replicas={self.replicas})")


def build_ndqd(epsilon, hopping, g, n_replicas):
    """N identical double quantum dots, each a biased two-site system.

    The 2x2 Hamiltonian is [[eps/2, t], [t, -eps/2]]: the source-side dot
    sits at +eps/2 and the drain-side dot at -eps/2, so positive detuning
    means downhill interdot relaxation for left-to-right transport.  The
    dipole coupling to the cavity is (g, -g).
    """
    if n_replicas < 1:
        raise ValueError(f"n_replicas must be >= 1, got {n_replicas}")
    ham = np.array([[0.5 * epsilon, hopping], [hopping, -0.5 * epsilon]])
    return GainMedium(ham, [g, -g], left_site=0, right_site=1,
                      replicas=n_replicas)


def build_cascade(m, epsilon, hopping, g, offset=0.0):
    """M single-level dots in series between the two leads.

    On-site energies descend from source to drain in equal steps of
    `epsilon`, centered at zero (plus `offset`), so the M = 2 cascade is
    exactly one DQD with the same detuning.  Only the first two sites
    couple to the cavity, with strengths (g, -g).
    """
    if m < 1:
        raise ValueError(f"site count must be >= 1, got {m}")
    onsite = offset + epsilon * (0.5 * (m - 1) - np.arange(m))
    ham = np.diag(onsite)
    if m >= 2:
        ham += np.diag(np.full(m - 1, float(hopping)), 1)
        ham += np.diag(np.full(m - 1, float(hopping)), -1)
    coupling = np.zeros(m)
    coupling[0] = g
    if m >= 2:
        coupling[1] = -g
    return GainMedium(ham, coupling, left_site=0, right_site=m - 1,
                      replicas=1)
