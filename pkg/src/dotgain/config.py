"""Run configuration: INI-style files with mandatory unit tags.

Sections: [model], [cavity], [leads], [grid], [sweep], [quadrature].
Every physical quantity must carry a unit suffix (e.g. "7.0 ueV",
"50 MHz"); frequencies are converted to energies at parse time via
E = h*f, which keeps the MHz/ueV mix of the experimental conventions out
of the numerics.  Unknown sections or keys are errors.
"""

import configparser
import hashlib
import io
from dataclasses import dataclass, field

import numpy as np

from .model import (H_UEV_PER_MHZ, KB_UEV_PER_K, CavityParams, LeadSet,
                    build_cascade, build_ndqd)
from .susceptibility import QuadratureConfig


class ConfigError(ValueError):
    """Malformed run configuration; the message names section and key."""


_ENERGY_UNITS = {
    "uev": 1.0,
    "mev": 1000.0,
    "mhz": H_UEV_PER_MHZ,
    "ghz": 1000.0 * H_UEV_PER_MHZ,
}
_UNIT_LABELS = {"uev": "ueV", "mev": "meV", "mhz": "MHz", "ghz": "GHz",
                "k": "K"}

SWEEP_AXES = ("omega", "epsilon", "hopping", "g", "gamma", "gamma_left",
              "gamma_right", "bias", "temperature", "offset", "sites")

_KNOWN_KEYS = {
    "model": {"architecture", "epsilon", "hopping", "g", "replicas",
              "sites", "offset"},
    "cavity": {"omega_c", "kappa"},
    "leads": {"gamma_left", "gamma_right", "bias", "temperature"},
    "grid": {"start", "stop", "points"},
    "sweep": {"axis1", "start1", "stop1", "points1",
              "axis2", "start2", "stop2", "points2"},
    "quadrature": {"abs_tol", "rel_tol", "cutoff", "max_intervals"},
}


def _parse_quantity(text, where, extra_units=None):
    parts = str(text).split()
    if len(parts) != 2:
        raise ConfigError(
            f"{where}: expected '<number> <unit>', got {text!r} (bare "
            "numbers are not accepted for physical quantities)")
    raw, unit = parts
    try:
        value = float(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}: {raw!r} is not a number") from exc
    units = dict(_ENERGY_UNITS)
    if extra_units:
        units.update(extra_units)
    factor = units.get(unit.lower())
    if factor is None:
        allowed = ", ".join(sorted(_UNIT_LABELS[u] for u in units))
        raise ConfigError(f"{where}: unknown unit {unit!r} (allowed: {allowed})")
    if not np.isfinite(value):
        raise ConfigError(f"{where}: value must be finite")
    return value * factor, unit.lower()


def parse_energy(text, where):
    """Parse 'value unit' into ueV; accepts ueV, meV, MHz, GHz."""
    return _parse_quantity(text, where)[0]


def parse_temperature(text, where):
    """Like parse_energy but additionally accepts kelvin (k_B T)."""
    return _parse_quantity(text, where, {"k": KB_UEV_PER_K})[0]


def _parse_int(text, where, minimum=None):
    try:
        value = int(str(text).strip())
    except ValueError as exc:
        raise ConfigError(f"{where}: {text!r} is not an integer") from exc
    if minimum is not None and value < minimum:
        raise ConfigError(f"{where}: must be >= {minimum}, got {value}")
    return value


def _parse_float(text, where, positive=False):
    try:
        value = float(str(text).strip())
    except ValueError as exc:
        raise ConfigError(f"{where}: {text!r} is not a number") from exc
    if positive and value <= 0:
        raise ConfigError(f"{where}: must be > 0, got {value}")
    return value


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter: name plus an inclusive linear range."""

    name: str
    start: float
    stop: float
    points: int

    def values(self):
        if self.name == "sites":
            return [int(round(v)) for v in
                    np.linspace(self.start, self.stop, self.points)]
        return list(np.linspace(self.start, self.stop, self.points))


@dataclass(frozen=True)
class RunConfig:
    """Fully parsed run configuration; all energies in ueV."""

    architecture: str
    epsilon: float
    hopping: float
    g: float
    replicas: int
    sites: int
    offset: float
    gamma_left: float
    gamma_right: float
    bias: float
    temperature: float
    omega_c: float
    kappa: float
    grid: tuple | None
    sweep: tuple = field(default_factory=tuple)
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)

    def medium(self, **overrides):
        eps = overrides.get("epsilon", self.epsilon)
        hop = overrides.get("hopping", self.hopping)
        g = overrides.get("g", self.g)
        off = overrides.get("offset", self.offset)
        sites = overrides.get("sites", self.sites)
        if self.architecture == "ndqd":
            return build_ndqd(eps, hop, g, self.replicas)
        return build_cascade(int(sites), eps, hop, g, offset=off)

    def leads(self, **overrides):
        gl = overrides.get("gamma_left",
                           overrides.get("gamma", self.gamma_left))
        gr = overrides.get("gamma_right",
                           overrides.get("gamma", self.gamma_right))
        bias = overrides.get("bias", self.bias)
        kt = overrides.get("temperature", self.temperature)
        return LeadSet(gamma_left=gl, gamma_right=gr, mu_left=0.5 * bias,
                       mu_right=-0.5 * bias, temperature=kt)

    def cavity(self):
        return CavityParams(omega_c=self.omega_c, kappa=self.kappa)

    def omegas(self):
        if self.grid is None:
            raise ConfigError("this configuration has no [grid] section")
        start, stop, points = self.grid
        return np.linspace(start, stop, points)

    def to_ini(self):
        """Canonical serialization (all energies in ueV, 17 significant
        digits); re-parsing it reproduces this config exactly."""
        def e(x):
            return f"{x:.17g} ueV"

        lines = ["[model]",
                 f"architecture = {self.architecture}",
                 f"epsilon = {e(self.epsilon)}",
                 f"hopping = {e(self.hopping)}",
                 f"g = {e(self.g)}"]
        if self.architecture == "ndqd":
            lines.append(f"replicas = {self.replicas}")
        else:
            lines.append(f"sites = {self.sites}")
            lines.append(f"offset = {e(self.offset)}")
        lines += ["", "[cavity]",
                  f"omega_c = {e(self.omega_c)}",
                  f"kappa = {e(self.kappa)}",
                  "", "[leads]",
                  f"gamma_left = {e(self.gamma_left)}",
                  f"gamma_right = {e(self.gamma_right)}",
                  f"bias = {e(self.bias)}",
                  f"temperature = {e(self.temperature)}"]
        if self.grid is not None:
            start, stop, points = self.grid
            lines += ["", "[grid]",
                      f"start = {e(start)}",
                      f"stop = {e(stop)}",
                      f"points = {points}"]
        if self.sweep:
            lines += ["", "[sweep]"]
            for i, ax in enumerate(self.sweep, start=1):
                if ax.name == "sites":
                    lines += [f"axis{i} = sites",
                              f"start{i} = {ax.start:.17g}",
                              f"stop{i} = {ax.stop:.17g}",
                              f"points{i} = {ax.points}"]
                else:
                    lines += [f"axis{i} = {ax.name}",
                              f"start{i} = {e(ax.start)}",
                              f"stop{i} = {e(ax.stop)}",
                              f"points{i} = {ax.points}"]
        lines += ["", "[quadrature]",
                  f"abs_tol = {e(self.quad.abs_tol)}",
                  f"rel_tol = {self.quad.rel_tol:.17g}"]
        if self.quad.cutoff is not None:
            lines.append(f"cutoff = {e(self.quad.cutoff)}")
        lines.append(f"max_intervals = {self.quad.max_intervals}")
        return "\n".join(lines) + "\n"

    def config_hash(self):
        return hashlib.sha256(self.to_ini().encode("utf-8")).hexdigest()


def _require(section, key, data, where):
    if key not in data:
        raise ConfigError(f"[{section}] is missing required key '{key}'"
                          f"{where}")
    return data[key]


def parse_config(text, source="<config>"):
    """Parse configuration text into a RunConfig."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc

    where = f" (in {source})"
    data = {}
    for section in parser.sections():
        if section not in _KNOWN_KEYS:
            raise ConfigError(f"unknown section [{section}]{where}")
        data[section] = dict(parser.items(section))
        unknown = set(data[section]) - _KNOWN_KEYS[section]
        if unknown:
            raise ConfigError(
                f"unknown key(s) {sorted(unknown)} in [{section}]{where}")
    for required in ("model", "cavity", "leads"):
        if required not in data:
            raise ConfigError(f"missing section [{required}]{where}")

    model = data["model"]
    arch = _require("model", "architecture", model, where).strip().lower()
    if arch not in ("ndqd", "cascade"):
        raise ConfigError(
            f"[model] architecture must be 'ndqd' or 'cascade', got "
            f"{arch!r}{where}")
    epsilon = parse_energy(_require("model", "epsilon", model, where),
                           "[model] epsilon")
    hopping = parse_energy(_require("model", "hopping", model, where),
                           "[model] hopping")
    g = parse_energy(_require("model", "g", model, where), "[model] g")
    if arch == "ndqd":
        if "sites" in model or "offset" in model:
            raise ConfigError(
                f"[model] sites/offset apply only to the cascade{where}")
        replicas = _parse_int(model.get("replicas", "1"),
                              "[model] replicas", minimum=1)
        sites, offset = 2, 0.0
    else:
        if "replicas" in model:
            raise ConfigError(
                f"[model] replicas applies only to the ndqd architecture "
                f"(the cascade is a single unit){where}")
        sites = _parse_int(_require("model", "sites", model, where),
                           "[model] sites", minimum=1)
        offset = (parse_energy(model["offset"], "[model] offset")
                  if "offset" in model else 0.0)
        replicas = 1

    cav = data["cavity"]
    omega_c = parse_energy(_require("cavity", "omega_c", cav, where),
                           "[cavity] omega_c")
    kappa = parse_energy(_require("cavity", "kappa", cav, where),
                         "[cavity] kappa")

    leads = data["leads"]
    gamma_left = parse_energy(_require("leads", "gamma_left", leads, where),
                              "[leads] gamma_left")
    gamma_right = parse_energy(_require("leads", "gamma_right", leads, where),
                               "[leads] gamma_right")
    bias = parse_energy(_require("leads", "bias", leads, where),
                        "[leads] bias")
    temperature = parse_temperature(
        _require("leads", "temperature", leads, where), "[leads] temperature")

    grid = None
    if "grid" in data:
        gd = data["grid"]
        start = parse_energy(_require("grid", "start", gd, where),
                             "[grid] start")
        stop = parse_energy(_require("grid", "stop", gd, where),
                            "[grid] stop")
        points = _parse_int(_require("grid", "points", gd, where),
                            "[grid] points", minimum=2)
        if stop <= start:
            raise ConfigError(f"[grid] stop must exceed start{where}")
        grid = (start, stop, points)

    sweep = []
    if "sweep" in data:
        sw = data["sweep"]
        for i in (1, 2):
            if f"axis{i}" not in sw:
                if any(f"{k}{i}" in sw for k in ("start", "stop", "points")):
                    raise ConfigError(
                        f"[sweep] has range keys for axis{i} but no "
                        f"axis{i}{where}")
                continue
            name = sw[f"axis{i}"].strip().lower()
            if name not in SWEEP_AXES:
                raise ConfigError(
                    f"[sweep] axis{i} = {name!r} is not a sweepable "
                    f"parameter (allowed: {', '.join(SWEEP_AXES)}){where}")
            if name == "sites" and arch == "ndqd":
                raise ConfigError(
                    f"[sweep] the sites axis applies only to the "
                    f"cascade{where}")
            if name == "sites":
                start_v = _parse_float(_require("sweep", f"start{i}", sw, where),
                                       f"[sweep] start{i}")
                stop_v = _parse_float(_require("sweep", f"stop{i}", sw, where),
                                      f"[sweep] stop{i}")
            elif name == "temperature":
                start_v = parse_temperature(
                    _require("sweep", f"start{i}", sw, where),
                    f"[sweep] start{i}")
                stop_v = parse_temperature(
                    _require("sweep", f"stop{i}", sw, where),
                    f"[sweep] stop{i}")
            else:
                start_v = parse_energy(_require("sweep", f"start{i}", sw, where),
                                       f"[sweep] start{i}")
                stop_v = parse_energy(_require("sweep", f"stop{i}", sw, where),
                                      f"[sweep] stop{i}")
            points_v = _parse_int(_require("sweep", f"points{i}", sw, where),
                                  f"[sweep] points{i}", minimum=2)
            if stop_v == start_v:
                raise ConfigError(
                    f"[sweep] axis{i} ({name}) has a zero-width range{where}")
            sweep.append(SweepAxis(name=name, start=start_v, stop=stop_v,
                                   points=points_v))
        if sweep and "axis1" not in sw:
            raise ConfigError(f"[sweep] axis2 given without axis1{where}")

    if grid is None and not sweep:
        raise ConfigError(
            f"configuration needs a [grid] section or [sweep] axes{where}")
    if grid is not None and sweep:
        raise ConfigError(
            f"[grid] and [sweep] are mutually exclusive; sweep the 'omega' "
            f"axis for frequency maps{where}")

    quad_kwargs = {}
    if "quadrature" in data:
        qd = data["quadrature"]
        if "abs_tol" in qd:
            quad_kwargs["abs_tol"] = parse_energy(qd["abs_tol"],
                                                  "[quadrature] abs_tol")
        if "rel_tol" in qd:
            quad_kwargs["rel_tol"] = _parse_float(qd["rel_tol"],
                                                  "[quadrature] rel_tol",
                                                  positive=True)
        if "cutoff" in qd:
            quad_kwargs["cutoff"] = parse_energy(qd["cutoff"],
                                                 "[quadrature] cutoff")
        if "max_intervals" in qd:
            quad_kwargs["max_intervals"] = _parse_int(
                qd["max_intervals"], "[quadrature] max_intervals", minimum=4)
    try:
        quad = QuadratureConfig(**quad_kwargs)
    except ValueError as exc:
        raise ConfigError(f"[quadrature]: {exc}{where}") from exc

    return RunConfig(architecture=arch, epsilon=epsilon, hopping=hopping,
                     g=g, replicas=replicas, sites=sites, offset=offset,
                     gamma_left=gamma_left, gamma_right=gamma_right,
                     bias=bias, temperature=temperature, omega_c=omega_c,
                     kappa=kappa, grid=grid, sweep=tuple(sweep), quad=quad)


def load_config(path):
    """Parse a configuration file from disk."""
    with io.open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read(), source=str(path))
