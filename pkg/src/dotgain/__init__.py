"""dotgain: microwave photon gain in voltage-biased quantum-dot cavity
hybrids, from Keldysh Green's functions to cavity transmission, emission
spectrum and photon number."""

__version__ = "0.1.0"

from .model import (Energy, H_UEV_PER_MHZ, KB_UEV_PER_K, CavityParams,
                    GainMedium, LeadSet, build_cascade, build_ndqd,
                    mhz_to_uev, symmetric_bias_leads, uev_to_mhz)
from .greens import (GreenSet, LeadSelfEnergySet, SingularityError, fermi,
                     green_set, lead_self_energy, spectral_function)
from .quadrature import IntegrationError, adaptive_gauss_kronrod
from .susceptibility import (QuadratureConfig, SusceptibilityPoint,
                             default_cutoff, f_lesser_greater, f_real_imag,
                             susceptibility_grid, susceptibility_point)
from .cavity import (CavityResponse, GridError, PhotonNumber, SumRuleResult,
                     ThresholdError, cavity_response, emission_spectrum,
                     fwhm, mean_photon_number, photon_number,
                     resonance_margin, resonance_profile, resonance_roots,
                     sum_rule_check, threshold_margin, transmission)
from .config import ConfigError, RunConfig, SweepAxis, load_config, \
    parse_config
from .selfcheck import run_selfcheck

__all__ = [
    "Energy", "H_UEV_PER_MHZ", "KB_UEV_PER_K", "CavityParams", "GainMedium",
    "LeadSet", "build_cascade", "build_ndqd", "mhz_to_uev",
    "symmetric_bias_leads", "uev_to_mhz",
    "GreenSet", "LeadSelfEnergySet", "SingularityError", "fermi",
    "green_set", "lead_self_energy", "spectral_function",
    "IntegrationError", "adaptive_gauss_kronrod",
    "QuadratureConfig", "SusceptibilityPoint", "default_cutoff",
    "f_lesser_greater", "f_real_imag", "susceptibility_grid",
    "susceptibility_point",
    "CavityResponse", "GridError", "PhotonNumber", "SumRuleResult",
    "ThresholdError", "cavity_response", "emission_spectrum", "fwhm",
    "mean_photon_number", "photon_number", "resonance_margin",
    "resonance_profile", "resonance_roots", "sum_rule_check",
    "threshold_margin", "transmission",
    "ConfigError", "RunConfig", "SweepAxis", "load_config", "parse_config",
    "run_selfcheck",
]
