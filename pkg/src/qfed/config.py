"""YAML run configuration: parsing, validation and canonical serialization.

Units are carried in key names (``thickness_um``, ``energy_eV``,
``temperature_K``). Complex material parameters are ``[re, im]`` pairs.
Every diagnostic names the offending key path and, when known, the line.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np
import yaml

from .model import Layer, Stack

QUANTITIES = ("ldos", "nldos", "ifdos", "photon-number", "fluctuations", "poynting",
              "net-emission", "steady-temperature", "verify")
LDOS_UNITS = ("natural", "si")
UM = 1e-6


class ConfigError(ValueError):
    def __init__(self, path: str, message: str, line: int | None = None):
        self.path, self.message, self.line = path, message, line
        where = f"{path}" + (f" (line {line})" if line is not None else "")
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class LayerSpec:
    eps: complex = 1.0
    mu: complex = 1.0
    thickness_um: float | None = None
    temperature_K: float = 0.0
    name: str = ""


@dataclass(frozen=True)
class Grid:
    """Explicit values, or a linear grid (min, max, count)."""

    values: tuple[float, ...] | None = None
    linear: tuple[float, float, int] | None = None

    def points(self) -> np.ndarray:
        if self.values is not None:
            return np.array(self.values, float)
        lo, hi, n = self.linear
        return np.linspace(lo, hi, n)


@dataclass(frozen=True)
class Options:
    loss_floor: float = 1e-9
    quad_tol: float = 1e-8
    ldos_units: str = "natural"
    band_eV: tuple[float, float] | None = None
    probe_layer: int | None = None


@dataclass(frozen=True)
class RunConfig:
    layers: tuple[LayerSpec, ...]
    frequency: Grid
    positions: Grid = Grid(values=())
    quantity: str = "ldos"
    origin_um: float = 0.0
    source_positions: Grid | None = None
    options: Options = field(default_factory=Options)

    @property
    def stack(self) -> Stack:
        layers = tuple(Layer(s.eps, s.mu, None if s.thickness_um is None else s.thickness_um * UM,
                             s.temperature_K, s.name) for s in self.layers)
        return Stack(layers, self.origin_um * UM)

    def energies_ev(self) -> np.ndarray:
        return self.frequency.points()

    def positions_m(self) -> np.ndarray:
        return self.positions.points() * UM

    def digest(self) -> str:
        return hashlib.sha256(serialize_config(self).encode()).hexdigest()


# -- parsing ------------------------------------------------------------------

class _Reader:
    """Walks plain data alongside the composed YAML nodes to recover line numbers."""

    def __init__(self, data, node):
        self.data, self.node = data, node

    @staticmethod
    def _child(node, key):
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                if k.value == key:
                    return v
        if isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            return node.value[key]
        return None

    def line(self, path):
        node = self.node
        for key in path:
            nxt = self._child(node, key)
            if nxt is None:
                break
            node = nxt
        return None if node is None else node.start_mark.line + 1

    def fail(self, path, message):
        raise ConfigError(_fmt(path), message, self.line(path))


def _fmt(path) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


def _mapping(r: _Reader, value, path, allowed, required=()):
    if not isinstance(value, dict):
        r.fail(path, "expected a mapping")
    for k in value:
        if k not in allowed:
            r.fail(path + [k], f"unknown key (allowed: {', '.join(allowed)})")
    for k in required:
        if k not in value:
            r.fail(path, f"missing required key {k!r}")
    return value


def _number(r: _Reader, value, path, positive=False, nonneg=False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        r.fail(path, f"expected a number, got {value!r}")
    v = float(value)
    if not np.isfinite(v):
        r.fail(path, "must be finite")
    if positive and not v > 0:
        r.fail(path, f"must be positive, got {value!r}")
    if nonneg and v < 0:
        r.fail(path, f"must be non-negative, got {value!r}")
    return v


def _complex(r: _Reader, value, path) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(_number(r, value, path))
    if not isinstance(value, list) or len(value) != 2:
        r.fail(path, "expected a number or an [re, im] pair")
    return complex(_number(r, value[0], path + [0]), _number(r, value[1], path + [1]))


def _grid(r: _Reader, value, path, list_key, grid_key, positive=False) -> Grid:
    _mapping(r, value, path, (list_key, grid_key))
    if (list_key in value) == (grid_key in value):
        r.fail(path, f"give exactly one of {list_key!r} or {grid_key!r}")
    if list_key in value:
        items = value[list_key]
        if isinstance(items, (int, float)) and not isinstance(items, bool):
            items = [items]
        if not isinstance(items, list):
            r.fail(path + [list_key], "expected a number or a list of numbers")
        return Grid(values=tuple(_number(r, v, path + [list_key, i], positive) for i, v in enumerate(items)))
    g = _mapping(r, value[grid_key], path + [grid_key], ("min", "max", "count"), ("min", "max", "count"))
    lo = _number(r, g["min"], path + [grid_key, "min"], positive)
    hi = _number(r, g["max"], path + [grid_key, "max"], positive)
    n = g["count"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        r.fail(path + [grid_key, "count"], "expected a positive integer")
    if hi < lo:
        r.fail(path + [grid_key], "max must not be below min")
    return Grid(linear=(lo, hi, n))


def _layer(r: _Reader, value, path, outer: bool) -> LayerSpec:
    _mapping(r, value, path, ("name", "thickness_um", "eps", "mu", "temperature_K"))
    name = value.get("name", "")
    if not isinstance(name, str):
        r.fail(path + ["name"], "expected a string")
    label = f"layer {path[-1] + 1}" + (f" ({name})" if name else "")
    thick = value.get("thickness_um")
    if outer and thick is not None:
        r.fail(path + ["thickness_um"], f"{label}: outer layers are semi-infinite; omit thickness_um")
    if not outer:
        if thick is None:
            r.fail(path, f"{label}: interior layers need thickness_um")
        if isinstance(thick, bool) or not isinstance(thick, (int, float)) or not thick > 0:
            r.fail(path + ["thickness_um"], f"{label}: thickness must be positive, got {thick!r}")
        thick = float(thick)
    eps = _complex(r, value.get("eps", 1.0), path + ["eps"])
    mu = _complex(r, value.get("mu", 1.0), path + ["mu"])
    T = _number(r, value.get("temperature_K", 0.0), path + ["temperature_K"], nonneg=True)
    spec = LayerSpec(eps, mu, thick, T, name)
    try:
        Layer(eps, mu, None if thick is None else thick * UM, T, name)
    except ValueError as exc:
        r.fail(path, f"{label}: {exc}")
    return spec


def parse_config(text: str) -> RunConfig:
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError("<document>", f"malformed YAML: {getattr(exc, 'problem', exc)}",
                          None if mark is None else mark.line + 1) from None
    r = _Reader(data, node)
    top = ("layers", "origin_um", "frequency", "positions", "source_positions", "quantity", "options")
    _mapping(r, data, [], top, ("layers", "frequency"))

    layers_raw = data["layers"]
    if not isinstance(layers_raw, list) or not layers_raw:
        r.fail(["layers"], "expected a non-empty list of layers")
    n = len(layers_raw)
    layers = tuple(_layer(r, v, ["layers", i], i in (0, n - 1)) for i, v in enumerate(layers_raw))
    origin = _number(r, data.get("origin_um", 0.0), ["origin_um"])

    frequency = _grid(r, data["frequency"], ["frequency"], "energy_eV", "sweep_eV", positive=True)
    positions = (_grid(r, data["positions"], ["positions"], "list_um", "grid_um")
                 if data.get("positions") is not None else Grid(values=()))
    sources = (_grid(r, data["source_positions"], ["source_positions"], "list_um", "grid_um")
               if data.get("source_positions") is not None else None)

    quantity = data.get("quantity", "ldos")
    if quantity not in QUANTITIES:
        r.fail(["quantity"], f"unknown quantity {quantity!r} (choose from {', '.join(QUANTITIES)})")
    if quantity in ("nldos", "ifdos") and sources is None:
        r.fail(["source_positions"], f"quantity {quantity!r} needs source_positions")

    opts_raw = data.get("options") or {}
    _mapping(r, opts_raw, ["options"], ("loss_floor", "quad_tol", "ldos_units", "band_eV", "probe_layer"))
    o = ["options"]
    loss_floor = _number(r, opts_raw.get("loss_floor", 1e-9), o + ["loss_floor"], nonneg=True)
    quad_tol = _number(r, opts_raw.get("quad_tol", 1e-8), o + ["quad_tol"], positive=True)
    units = opts_raw.get("ldos_units", "natural")
    if units not in LDOS_UNITS:
        r.fail(o + ["ldos_units"], f"expected one of {', '.join(LDOS_UNITS)}")
    band = opts_raw.get("band_eV")
    if band is not None:
        if not isinstance(band, list) or len(band) != 2:
            r.fail(o + ["band_eV"], "expected [min, max]")
        band = tuple(_number(r, v, o + ["band_eV", i], positive=True) for i, v in enumerate(band))
        if not band[0] < band[1]:
            r.fail(o + ["band_eV"], "min must be below max")
    probe = opts_raw.get("probe_layer")
    if probe is not None and (isinstance(probe, bool) or not isinstance(probe, int) or not 1 < probe < n):
        r.fail(o + ["probe_layer"], f"expected an interior layer index between 2 and {n - 1}")
    if quantity == "steady-temperature" and (band is None or probe is None):
        r.fail(["options"], "steady-temperature needs options.band_eV and options.probe_layer")

    return RunConfig(layers, frequency, positions, quantity, origin, sources,
                     Options(loss_floor, quad_tol, units, band, probe))


# -- serialization --------------------------------------------------------------

def _pair(z: complex):
    return [float(z.real), float(z.imag)]


def _grid_dict(g: Grid, list_key, grid_key):
    if g.values is not None:
        return {list_key: [float(v) for v in g.values]}
    lo, hi, n = g.linear
    return {grid_key: {"min": float(lo), "max": float(hi), "count": int(n)}}


def config_to_dict(cfg: RunConfig) -> dict:
    layers = []
    for s in cfg.layers:
        d = {}
        if s.name:
            d["name"] = s.name
        if s.thickness_um is not None:
            d["thickness_um"] = float(s.thickness_um)
        d["eps"] = _pair(s.eps)
        d["mu"] = _pair(s.mu)
        d["temperature_K"] = float(s.temperature_K)
        layers.append(d)
    o = cfg.options
    opts = {"loss_floor": o.loss_floor, "quad_tol": o.quad_tol, "ldos_units": o.ldos_units}
    if o.band_eV is not None:
        opts["band_eV"] = [float(v) for v in o.band_eV]
    if o.probe_layer is not None:
        opts["probe_layer"] = o.probe_layer
    out = {"quantity": cfg.quantity, "origin_um": float(cfg.origin_um), "layers": layers,
           "frequency": _grid_dict(cfg.frequency, "energy_eV", "sweep_eV"),
           "positions": _grid_dict(cfg.positions, "list_um", "grid_um")}
    if cfg.source_positions is not None:
        out["source_positions"] = _grid_dict(cfg.source_positions, "list_um", "grid_um")
    out["options"] = opts
    return out


def serialize_config(cfg: RunConfig) -> str:
    return yaml.safe_dump(config_to_dict(cfg), sort_keys=False, default_flow_style=None)


def cavity_config(emitter: str | None = "magnetic", quantity: str = "ldos") -> RunConfig:
    """The built-in cavity: walls eps = 10, 1 um thick, a 10 um gap with a centred 1 um emitter."""
    from .fixtures import CAVITY_ENERGY_EV, cavity

    st = cavity(emitter)
    layers = tuple(LayerSpec(la.epsilon, la.mu, None if la.thickness is None else round(la.thickness / UM, 12),
                             la.temperature, la.name) for la in st.layers)
    return RunConfig(layers, Grid(values=(CAVITY_ENERGY_EV,)), Grid(linear=(-8.0, 8.0, 161)), quantity,
                     round(st.origin / UM, 12))
