"""Cavity observables built from the charge susceptibility.

With N identical replicas the self-energy is N times the per-replica
value, so the complex transmission is

    t(w) = i*kappa / [(w - w_c - N F'(w)) + i (kappa - N F''(w))]

and the emission spectrum

    S(w) = i N F^<(w) / [(w - w_c - N F'(w))^2 + (kappa - N F''(w))^2].

Everything here is restricted to the below-threshold regime
kappa > N F''; crossing it is a hard error, not a clamp.
"""

import math
from dataclasses import dataclass

import numpy as np

from .model import CavityParams, GainMedium, LeadSet
from .susceptibility import (QuadratureConfig, susceptibility_grid,
                             susceptibility_point)


class ThresholdError(RuntimeError):
    """kappa <= N*F''(omega): at or above the lasing threshold.  The model
    is valid only below threshold; retune parameters or reduce N."""


class GridError(ValueError):
    """The supplied frequency grid cannot support the requested integral."""


def _margin(cavity, susc, n):
    return cavity.kappa - n * susc.f_imag


def transmission(omega, cavity: CavityParams, susc, n):
    """Complex cavity transmission at one frequency for n replicas."""
    margin = _margin(cavity, susc, n)
    if margin <= 0:
        raise ThresholdError(
            f"kappa = {cavity.kappa:g} <= N*F'' = {n * susc.f_imag:g} at "
            f"omega = {omega:g}: at or above the lasing threshold, outside "
            "the below-threshold regime this model covers")
    detune = omega - cavity.omega_c - n * susc.f_real
    return 1j * cavity.kappa / (detune + 1j * margin)


def emission_spectrum(omega, cavity: CavityParams, susc, n):
    """S(omega) >= 0, the electrically induced emission spectrum (1/ueV)."""
    margin = _margin(cavity, susc, n)
    if margin <= 0:
        raise ThresholdError(
            f"kappa <= N*F'' at omega = {omega:g}: above threshold")
    detune = omega - cavity.omega_c - n * susc.f_real
    weight = n * (1j * susc.f_lesser).real
    return weight / (detune * detune + margin * margin)


def threshold_margin(cavity: CavityParams, points, n):
    """kappa - n * max F'' over the grid; positive means below threshold."""
    if not points:
        raise ValueError("empty susceptibility grid")
    return cavity.kappa - n * max(p.f_imag for p in points)


def resonance_margin(cavity: CavityParams, points, n):
    """kappa - n F'' at the dressed cavity resonance(s): the dynamical
    stability margin.

    Wide grids can sample far-detuned frequencies where n F''(w) > kappa
    without any instability (the real detuning keeps the response finite
    there); lasing sets in only when the margin vanishes at a root of
    w - w_c - n F'(w).  Returns the smallest root margin, or the margin at
    the frequency closest to resonance if the grid brackets no root.
    """
    if not points:
        raise ValueError("empty susceptibility grid")
    omegas = np.array([p.omega for p in points])
    f_real = np.array([p.f_real for p in points])
    f_imag = np.array([p.f_imag for p in points])
    h = omegas - cavity.omega_c - n * f_real
    margins = []
    for i in range(len(omegas) - 1):
        if h[i] == 0.0 or h[i] * h[i + 1] < 0:
            frac = 0.0 if h[i] == 0.0 else h[i] / (h[i] - h[i + 1])
            fi = f_imag[i] + frac * (f_imag[i + 1] - f_imag[i])
            margins.append(cavity.kappa - n * fi)
    if h[-1] == 0.0:
        margins.append(cavity.kappa - n * f_imag[-1])
    if not margins:
        margins.append(cavity.kappa - n * f_imag[np.argmin(np.abs(h))])
    return min(margins)


@dataclass(frozen=True)
class CavityResponse:
    """Transmission, gain, phase and emission spectrum over a grid."""

    omegas: np.ndarray
    transmission: np.ndarray
    gain: np.ndarray
    phase: np.ndarray
    spectrum: np.ndarray
    n_replicas: int
    threshold_margin: float


def cavity_response(cavity: CavityParams, points, n):
    """Bundle the pointwise observables; fails above threshold."""
    margin = threshold_margin(cavity, points, n)
    if margin <= 0:
        raise ThresholdError(
            f"kappa - N*max F'' = {margin:g} <= 0 over the grid: at or "
            "above the lasing threshold")
    omegas = np.array([p.omega for p in points])
    t = np.array([transmission(p.omega, cavity, p, n) for p in points])
    s = np.array([emission_spectrum(p.omega, cavity, p, n) for p in points])
    return CavityResponse(omegas=omegas, transmission=t,
                          gain=np.abs(t) ** 2, phase=np.angle(t),
                          spectrum=s, n_replicas=int(n),
                          threshold_margin=margin)


@dataclass(frozen=True)
class PhotonNumber:
    """Mean cavity photon number: resonance-pole value vs exact spectral
    integral int S dw / 2pi."""

    pole_approximation: float
    spectral_integral: float


def _interp_components(points, omega):
    omegas = np.array([p.omega for p in points])
    if not (omegas[0] <= omega <= omegas[-1]):
        raise GridError(
            f"omega = {omega:g} lies outside the grid "
            f"[{omegas[0]:g}, {omegas[-1]:g}]")
    f_real = np.interp(omega, omegas, np.array([p.f_real for p in points]))
    f_imag = np.interp(omega, omegas, np.array([p.f_imag for p in points]))
    emit = np.interp(omega, omegas,
                     np.array([(1j * p.f_lesser).real for p in points]))
    return f_real, f_imag, emit


def _spectrum_direct(cavity, points, n):
    # raw formula, finite also where the local margin dips negative
    omegas = np.array([p.omega for p in points])
    detune = omegas - cavity.omega_c - n * np.array([p.f_real for p in points])
    margin = cavity.kappa - n * np.array([p.f_imag for p in points])
    weight = n * np.array([(1j * p.f_lesser).real for p in points])
    return omegas, weight / (detune * detune + margin * margin)


def mean_photon_number(cavity: CavityParams, points, n):
    """Photon number from a susceptibility grid wide enough that the
    emission spectrum has decayed to < 1e-6 of its peak at the ends."""
    if resonance_margin(cavity, points, n) <= 0:
        raise ThresholdError("at or above threshold at the dressed "
                             "cavity resonance")
    omegas, s = _spectrum_direct(cavity, points, n)
    peak = s.max()
    if peak > 0 and (s[0] > 1e-6 * peak or s[-1] > 1e-6 * peak):
        raise GridError(
            "emission spectrum has not decayed below 1e-6 of its peak at "
            f"the grid ends (S_left/peak = {s[0] / peak:.2e}, "
            f"S_right/peak = {s[-1] / peak:.2e}); widen the grid")
    integral = float(np.trapezoid(s, omegas)) / (2.0 * np.pi)
    _, f_imag_c, emit_c = _interp_components(points, cavity.omega_c)
    pole = n * emit_c / (2.0 * (cavity.kappa - n * f_imag_c))
    return PhotonNumber(pole_approximation=float(pole),
                        spectral_integral=integral)


def photon_number(cavity: CavityParams, leads: LeadSet, medium: GainMedium,
                  n, quad: QuadratureConfig | None = None, workers=None,
                  max_doublings=20):
    """Auto-widening spectral photon number.

    Builds a resonance-centered graded grid and doubles its span (at most
    max_doublings times) until the emission spectrum at the ends is below
    1e-6 of the peak, then evaluates both photon-number routes.
    """
    center = susceptibility_point(cavity.omega_c, leads, medium, quad)
    margin = _margin(cavity, center, n)
    if margin <= 0:
        raise ThresholdError(
            f"kappa - N*F''(omega_c) = {margin:g} <= 0: above threshold")
    w_star = cavity.omega_c + n * center.f_real
    span = max(1500.0 * margin, 20.0 * cavity.kappa)
    for _ in range(max_doublings + 1):
        grid = _graded_grid(w_star, margin, span)
        points = susceptibility_grid(grid, leads, medium, quad,
                                     workers=workers)
        try:
            return mean_photon_number(cavity, points, n)
        except GridError:
            span *= 2.0
    raise GridError(
        f"emission spectrum endpoints failed to converge after "
        f"{max_doublings} grid doublings (final half-span {span:g} ueV)")


def _graded_grid(center, width, span):
    # dense core over the resonance, geometric shells out to +-span
    core_half = min(12.0 * width, span)
    core = np.linspace(center - core_half, center + core_half, 961)
    if span <= core_half:
        return core
    n_shell = max(int(np.ceil(np.log(span / core_half) / np.log(1.12))), 1)
    shell = core_half * 1.12 ** np.arange(1, n_shell + 1)
    shell[-1] = span
    return np.unique(np.concatenate((center - shell[::-1], core,
                                     center + shell)))


@dataclass(frozen=True)
class SumRuleResult:
    """Transmission sum rule and gain area law, numerically integrated."""

    re_integral: float
    im_integral: float
    area_lhs: float
    area_rhs: float


def sum_rule_check(cavity: CavityParams, points, n):
    """int t dw/2pi = kappa/2 (Re part; Im part 0) plus the gain area law
    int |t|^2 dw/2pi = kappa^2 / (2 [kappa - N F''(w_c)]).

    The 1/w Lorentzian tails beyond the grid are added analytically.
    """
    omegas = np.array([p.omega for p in points])
    x_left = cavity.omega_c - omegas[0]
    x_right = omegas[-1] - cavity.omega_c
    if x_left < 1e3 * cavity.kappa or x_right < 1e3 * cavity.kappa:
        raise GridError(
            "sum-rule grid must span at least omega_c +- 1000*kappa")
    if resonance_margin(cavity, points, n) <= 0:
        raise ThresholdError("at or above threshold at the dressed "
                             "cavity resonance")
    detune = omegas - cavity.omega_c - n * np.array([p.f_real for p in points])
    local = cavity.kappa - n * np.array([p.f_imag for p in points])
    t = 1j * cavity.kappa / (detune + 1j * local)
    k = cavity.kappa
    re_tail = k * (math.atan(k / x_right) + math.atan(k / x_left)) / (2 * np.pi)
    im_tail = k * math.log((x_left ** 2 + k ** 2) / (x_right ** 2 + k ** 2)) / (4 * np.pi)
    re_integral = float(np.trapezoid(t.real, omegas)) / (2 * np.pi) + re_tail
    im_integral = float(np.trapezoid(t.imag, omegas)) / (2 * np.pi) + im_tail
    area_tail = k * (math.atan(k / x_right) + math.atan(k / x_left)) / (2 * np.pi)
    area_lhs = float(np.trapezoid(np.abs(t) ** 2, omegas)) / (2 * np.pi) + area_tail
    _, f_imag_c, _ = _interp_components(points, cavity.omega_c)
    area_rhs = k ** 2 / (2.0 * (k - n * f_imag_c))
    return SumRuleResult(re_integral=re_integral, im_integral=im_integral,
                         area_lhs=area_lhs, area_rhs=float(area_rhs))


def resonance_roots(cavity: CavityParams, points, n, evaluator=None,
                    tol=None):
    """All omega on the grid span solving w - w_c - N F'(w) = 0.

    With `evaluator` (a callable omega -> F'(omega)) each bracket found on
    the grid is refined by bisection to `tol` (default 1e-6 * kappa);
    otherwise the roots are linearly interpolated between grid points.
    """
    if tol is None:
        tol = 1e-6 * cavity.kappa
    omegas = np.array([p.omega for p in points])
    h = omegas - cavity.omega_c - n * np.array([p.f_real for p in points])
    roots = []
    for i in range(len(omegas) - 1):
        if h[i] == 0.0:
            roots.append(float(omegas[i]))
            continue
        if h[i] * h[i + 1] < 0:
            lo, hi = omegas[i], omegas[i + 1]
            if evaluator is None:
                roots.append(float(lo + (hi - lo) * h[i] / (h[i] - h[i + 1])))
                continue
            flo = h[i]
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                fmid = mid - cavity.omega_c - n * evaluator(mid)
                if flo * fmid <= 0:
                    hi = mid
                else:
                    lo, flo = mid, fmid
            roots.append(0.5 * (lo + hi))
    if h[-1] == 0.0:
        roots.append(float(omegas[-1]))
    return roots


def resonance_profile(cavity: CavityParams, leads: LeadSet,
                      medium: GainMedium, n,
                      quad: QuadratureConfig | None = None, span=30.0,
                      points=1201, workers=None):
    """Locally dense transmission line shape around the n-replica resonance.

    Locates w* solving w - w_c - N F'(w) = 0 by bisection, then samples
    `points` frequencies across +- span * (kappa - N F''(w*)).
    Returns (CavityResponse, w_star).
    """
    def f_real_at(w):
        return susceptibility_point(w, leads, medium, quad).f_real

    k = cavity.kappa
    scan = np.linspace(cavity.omega_c - 10 * k, cavity.omega_c + 10 * k, 41)
    coarse = susceptibility_grid(scan, leads, medium, quad, workers=workers)
    roots = resonance_roots(cavity, coarse, n, evaluator=f_real_at)
    if not roots:
        raise ValueError("no resonance root within omega_c +- 10*kappa")
    w_star = roots[0]
    star = susceptibility_point(w_star, leads, medium, quad)
    margin = _margin(cavity, star, n)
    if margin <= 0:
        raise ThresholdError(
            f"kappa - N*F''(w*) = {margin:g} <= 0 at the resonance")
    grid = np.linspace(w_star - span * margin, w_star + span * margin, points)
    pts = susceptibility_grid(grid, leads, medium, quad, workers=workers)
    return cavity_response(cavity, pts, n), w_star


def fwhm(omegas, gain):
    """Full width at half maximum of a single-peaked gain curve, with
    linear interpolation at the half-height crossings."""
    omegas = np.asarray(omegas, dtype=float)
    gain = np.asarray(gain, dtype=float)
    i_peak = int(np.argmax(gain))
    half = 0.5 * gain[i_peak]
    left = None
    for i in range(i_peak, 0, -1):
        if gain[i - 1] <= half <= gain[i]:
            frac = (half - gain[i - 1]) / (gain[i] - gain[i - 1])
            left = omegas[i - 1] + frac * (omegas[i] - omegas[i - 1])
            break
    right = None
    for i in range(i_peak, len(gain) - 1):
        if gain[i + 1] <= half <= gain[i]:
            frac = (gain[i] - half) / (gain[i] - gain[i + 1])
            right = omegas[i] + frac * (omegas[i + 1] - omegas[i])
            break
    if left is None or right is None:
        raise ValueError("half-maximum crossings not bracketed by the grid")
    return right - left
