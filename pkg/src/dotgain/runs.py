"""Dataset generation for the CLI verbs: frequency curves and parameter
sweeps, emitted as CSV (with a '#' metadata header) or JSON.

Output is deterministic: rows are produced in lexicographic sweep order,
floats are serialized with 17 significant digits, and the metadata embeds
the canonical configuration so a dataset can be re-parsed into the exact
RunConfig that produced it.
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .cavity import ThresholdError, photon_number, transmission, emission_spectrum
from .config import RunConfig, parse_config
from .model import H_UEV_PER_MHZ
from .susceptibility import susceptibility_grid, susceptibility_point

COLUMNS = ["n", "omega_uev", "re_t", "im_t", "gain", "phase_rad",
           "spectrum_per_uev", "f_real_uev", "f_imag_uev",
           "i_f_lesser_uev", "neg_i_f_greater_uev", "threshold_margin_uev"]


@dataclass
class Dataset:
    """Columnar result set plus reproducibility metadata."""

    metadata: dict
    columns: list
    rows: list


def _metadata(config: RunConfig, extra=None):
    md = {
        "generator": "dotgain",
        "version": __version__,
        "units": ("energies in ueV, hbar = 1; MHz inputs converted via "
                  f"E = h*f with h = {H_UEV_PER_MHZ:.9e} ueV/MHz"),
        "config_hash": f"sha256:{config.config_hash()}",
        "quadrature": {"abs_tol": config.quad.abs_tol,
                       "rel_tol": config.quad.rel_tol,
                       "cutoff": config.quad.cutoff,
                       "max_intervals": config.quad.max_intervals},
        "config": config.to_ini(),
    }
    if extra:
        md.update(extra)
    return md


def _observable_row(axis_values, n, omega, cavity, pt):
    margin = cavity.kappa - n * pt.f_imag
    if margin <= 0:
        raise ThresholdError(
            f"kappa - N*F'' = {margin:g} <= 0 at N = {n}, "
            f"omega = {omega:.9g} ueV: at or above the lasing threshold")
    t = transmission(omega, cavity, pt, n)
    s = emission_spectrum(omega, cavity, pt, n)
    return (list(axis_values)
            + [float(n), omega, t.real, t.imag, abs(t) ** 2,
               float(np.angle(t)), s, pt.f_real, pt.f_imag,
               (1j * pt.f_lesser).real, (-1j * pt.f_greater).real, margin])


def run_transmission(config: RunConfig, workers=None):
    """Transmission/emission curves over the [grid] frequencies, one block
    per replica count N = 1 .. replicas."""
    omegas = config.omegas()
    medium = config.medium()
    leads = config.leads()
    cavity = config.cavity()
    points = susceptibility_grid(omegas, leads, medium, config.quad,
                                 workers=workers)
    rows = []
    for n in range(1, config.replicas + 1):
        for omega, pt in zip(omegas, points):
            rows.append(_observable_row([], n, float(omega), cavity, pt))
    return Dataset(metadata=_metadata(config), columns=list(COLUMNS),
                   rows=rows)


def run_spectrum(config: RunConfig, workers=None):
    """Like run_transmission, with the per-N mean photon number (pole and
    spectral-integral routes) added to the metadata."""
    ds = run_transmission(config, workers=workers)
    medium = config.medium()
    leads = config.leads()
    cavity = config.cavity()
    photons = {}
    for n in range(1, config.replicas + 1):
        pn = photon_number(cavity, leads, medium, n, config.quad,
                           workers=workers)
        photons[str(n)] = {"pole_approximation": pn.pole_approximation,
                           "spectral_integral": pn.spectral_integral}
    ds.metadata["photon_number"] = photons
    return ds


def _sweep_values(config: RunConfig):
    axes = config.sweep
    if len(axes) == 1:
        return [(v,) for v in axes[0].values()]
    outer, inner = axes[0].values(), axes[1].values()
    return [(a, b) for a in outer for b in inner]


def _point_task(config, names, combo):
    overrides = dict(zip(names, combo))
    omega = overrides.pop("omega", config.omega_c)
    medium = config.medium(**overrides)
    leads = config.leads(**overrides)
    return susceptibility_point(omega, leads, medium, config.quad), omega


def run_sweep(config: RunConfig, workers=None):
    """Cartesian parameter sweep (1 or 2 axes), evaluated at omega = omega_c
    unless 'omega' is itself a swept axis.  Row-major in the axis order."""
    if not config.sweep:
        raise ValueError("configuration has no [sweep] axes")
    names = [ax.name for ax in config.sweep]
    combos = _sweep_values(config)
    cavity = config.cavity()

    if workers is None or workers <= 1:
        results = [_point_task(config, names, c) for c in combos]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_point_task, config, names, c)
                       for c in combos]
            results = [f.result() for f in futures]

    rows = []
    for combo, (pt, omega) in zip(combos, results):
        axis_vals = [float(v) for v in combo]
        for n in range(1, config.replicas + 1):
            rows.append(_observable_row(axis_vals, n, float(omega), cavity, pt))
    columns = [f"sweep_{name}" for name in names] + list(COLUMNS)
    extra = {"sweep_axes": [
        {"name": ax.name, "start": ax.start, "stop": ax.stop,
         "points": ax.points} for ax in config.sweep]}
    return Dataset(metadata=_metadata(config, extra), columns=columns,
                   rows=rows)


def _fmt(x):
    return format(float(x), ".17g")


def write_csv(dataset: Dataset, stream):
    md = dataset.metadata
    stream.write("# dotgain dataset\n")
    stream.write(f"# version: {md['version']}\n")
    stream.write(f"# units: {md['units']}\n")
    stream.write(f"# config-hash: {md['config_hash']}\n")
    q = md["quadrature"]
    cutoff = "auto" if q["cutoff"] is None else _fmt(q["cutoff"])
    stream.write(f"# quadrature: abs_tol={_fmt(q['abs_tol'])} "
                 f"rel_tol={_fmt(q['rel_tol'])} cutoff={cutoff} "
                 f"max_intervals={q['max_intervals']}\n")
    if "photon_number" in md:
        for n, pn in md["photon_number"].items():
            stream.write(f"# photon-number N={n}: "
                         f"pole={_fmt(pn['pole_approximation'])} "
                         f"integral={_fmt(pn['spectral_integral'])}\n")
    stream.write("# config-begin\n")
    for line in md["config"].rstrip("\n").split("\n"):
        stream.write(f"# {line}\n" if line else "#\n")
    stream.write("# config-end\n")
    stream.write(",".join(dataset.columns) + "\n")
    for row in dataset.rows:
        stream.write(",".join(_fmt(v) for v in row) + "\n")


def write_json(dataset: Dataset, stream):
    doc = {"metadata": dataset.metadata, "columns": dataset.columns,
           "rows": dataset.rows}
    json.dump(doc, stream, indent=1, sort_keys=True)
    stream.write("\n")


def read_embedded_config(path):
    """Recover the RunConfig embedded in a dataset written by this module."""
    text = open(path, "r", encoding="utf-8").read()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        return parse_config(doc["metadata"]["config"], source=str(path))
    lines = text.split("\n")
    try:
        lo = lines.index("# config-begin") + 1
        hi = lines.index("# config-end")
    except ValueError as exc:
        raise ValueError(f"{path}: no embedded config block") from exc
    body = "\n".join(line[2:] if line.startswith("# ") else ""
                     for line in lines[lo:hi])
    return parse_config(body, source=str(path))
