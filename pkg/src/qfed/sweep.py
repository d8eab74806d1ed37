"""Frequency/position sweeps producing result tables, and their CSV/JSON emission."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .config import UM, RunConfig
from .dos import ifdos, ldos, nldos
from .greens import LayeredGreens
from .model import CONSTANTS, PhysicalConstants, locate
from .observables import SpectralPoint, steady_state_temperature
from .quadrature import QuadratureSpec

WORKERS_ENV = "QFED_WORKERS"


class SweepError(RuntimeError):
    """A solver error at one sweep point; carries the offending (x, omega)."""

    def __init__(self, message: str, omega: float, x: float | None):
        self.omega, self.x = omega, x
        where = f"omega = {omega!r} rad/s" + ("" if x is None else f", x = {x!r} m")
        super().__init__(f"{message} [{where}]")


@dataclass(frozen=True)
class ResultTable:
    columns: tuple[str, ...]
    units: tuple[str, ...]
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.columns) != len(self.units):
            raise ValueError("one unit per column")
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row length differs from column count")

    def column(self, name) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def _columns(cfg: RunConfig):
    dos_unit = "2/(pi c S)" if cfg.options.ldos_units == "natural" else "s/m^2"
    nl_unit = f"{dos_unit}/m"
    base = [("energy_eV", "eV"), ("omega", "rad/s"), ("x_um", "um")]
    q = cfg.quantity
    if q == "ldos":
        return base + [("rho_e", dos_unit), ("rho_m", dos_unit), ("rho_tot", dos_unit)]
    if q == "nldos":
        return base + [("xp_um", "um")] + [(c, nl_unit) for c in
                                          ("e_from_e", "e_from_m", "m_from_e", "m_from_m", "tot_from_e", "tot_from_m")]
    if q == "ifdos":
        return base + [("xp_um", "um"), ("ifdos", nl_unit), ("e_part", nl_unit), ("m_part", nl_unit)]
    if q == "photon-number":
        return base + [("n_e", "1"), ("n_m", "1"), ("n_tot", "1")]
    if q == "fluctuations":
        return base + [("e_sq", "V^2 s/m^2"), ("h_sq", "A^2 s/m^2"), ("u", "J s/m^3")]
    if q == "poynting":
        return base + [("s", "J/m^2")]
    if q == "net-emission":
        return base + [("q", "J/m^3")]
    if q == "steady-temperature":
        return [("probe_layer", "1"), ("band_min_eV", "eV"), ("band_max_eV", "eV"), ("temperature", "K")]
    raise ValueError(f"quantity {q!r} is not a sweep quantity")


def _meta(cfg: RunConfig, constants: PhysicalConstants) -> dict:
    from . import __version__

    return {"config_sha256": cfg.digest(), "version": __version__, "quantity": cfg.quantity,
            "constants": asdict(constants)}


def _evaluate(cfg: RunConfig, energy: float, constants: PhysicalConstants) -> list:
    """All rows of one frequency, in position order."""
    omega = constants.omega_from_ev(energy)
    stack = cfg.stack
    unit = constants.ldos_unit if cfg.options.ldos_units == "natural" else 1.0
    quad = QuadratureSpec(rtol=cfg.options.quad_tol)
    xs = cfg.positions_m()
    rows = []
    x = None
    try:
        if cfg.quantity == "ldos":
            gr = LayeredGreens(stack, omega, constants)
            for x in xs:
                s = ldos(stack, omega, x, constants, gr)
                rows.append([energy, omega, float(x / UM), s.rho_e / unit, s.rho_m / unit, s.rho_tot / unit])
        elif cfg.quantity in ("nldos", "ifdos"):
            gr = LayeredGreens(stack, omega, constants)
            sources = cfg.source_positions.points() * UM
            for x in xs:
                lx = locate(stack, x)
                la = stack.layer(lx)
                for xp in sources:
                    lp = locate(stack, xp)
                    src = stack.layer(lp)
                    g = gr.tensor(x, xp, lx, lp)
                    if cfg.quantity == "nldos":
                        s = nldos(g, src.epsilon.imag, src.mu.imag, omega, la.epsilon, la.mu, constants)
                        vals = [s.e_from_e, s.e_from_m, s.m_from_e, s.m_from_m, s.tot_from_e, s.tot_from_m]
                    else:
                        s = ifdos(g, src.epsilon.imag, src.mu.imag, omega, gr.freq.n[lx].real, constants)
                        vals = [s.value, s.e_part, s.m_part]
                    rows.append([energy, omega, float(x / UM), float(xp / UM)] + [float(v) / unit for v in vals])
        else:
            sp = SpectralPoint(stack, omega, cfg.options.loss_floor, quad, constants)
            for x in xs:
                if cfg.quantity == "photon-number":
                    n = sp.photon_numbers(x)
                    vals = [n.n_e, n.n_m, n.n_tot]
                elif cfg.quantity == "fluctuations":
                    f = sp.fluctuations(x)
                    vals = [f.e_sq, f.h_sq, f.u]
                elif cfg.quantity == "poynting":
                    vals = [sp.poynting(x)]
                else:
                    vals = [sp.net_emission(x)]
                rows.append([energy, omega, float(x / UM)] + [float(v) for v in vals])
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        raise SweepError(f"{type(exc).__name__}: {exc}", omega, None if x is None else float(x)) from exc
    return rows


def resolve_workers(workers: int | None = None) -> int:
    """Explicit value first, then the environment variable, then 1."""
    if workers is None:
        env = os.environ.get(WORKERS_ENV)
        workers = int(env) if env else 1
    if workers < 1:
        raise ValueError("worker count must be at least 1")
    return workers


def run_sweep(cfg: RunConfig, workers: int | None = None, constants: PhysicalConstants = CONSTANTS) -> ResultTable:
    """Evaluate the configured quantity; rows are ordered by frequency, then position."""
    cols = _columns(cfg)
    names, units = tuple(c for c, _ in cols), tuple(u for _, u in cols)
    meta = _meta(cfg, constants)
    if cfg.quantity == "steady-temperature":
        lo, hi = cfg.options.band_eV
        band = (constants.omega_from_ev(lo), constants.omega_from_ev(hi))
        try:
            T = steady_state_temperature(cfg.stack, cfg.options.probe_layer, band,
                                         loss_floor=cfg.options.loss_floor,
                                         quad=QuadratureSpec(rtol=max(cfg.options.quad_tol, 1e-7), order=10),
                                         constants=constants)
        except (ArithmeticError, ValueError, RuntimeError) as exc:
            raise SweepError(f"{type(exc).__name__}: {exc}", band[0], None) from exc
        return ResultTable(names, units, [[cfg.options.probe_layer, lo, hi, T]], meta)
    energies = [float(e) for e in cfg.energies_ev()]
    workers = min(resolve_workers(workers), max(1, len(energies)))
    if workers == 1 or len(cfg.positions_m()) == 0:
        chunks = [_evaluate(cfg, e, constants) for e in energies]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_evaluate, [cfg] * len(energies), energies, [constants] * len(energies)))
    rows = [row for chunk in chunks for row in chunk]
    return ResultTable(names, units, rows, meta)


# -- emission -------------------------------------------------------------------

def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.16e}" if math.isfinite(v) else str(float(v))
    return str(v)


def _json_value(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def emit(table: ResultTable, fmt: str = "csv") -> bytes:
    """CSV (header, '#'-prefixed units row, data) or a single JSON object."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(table.columns)
        w.writerow(["# " + table.units[0], *table.units[1:]] if table.units else ["#"])
        for row in table.rows:
            w.writerow([_cell(v) for v in row])
        return buf.getvalue().encode()
    if fmt == "json":
        obj = {"meta": table.meta, "columns": list(table.columns), "units": list(table.units),
               "rows": [[_json_value(v) for v in row] for row in table.rows]}
        return (json.dumps(obj, allow_nan=False, default=_json_value) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")


def verification_table(results, meta: dict | None = None) -> ResultTable:
    """Table of (fixture, check, status, residual, tolerance) rows from verification results."""
    rows = [[fixture, r.name, r.status, r.residual, r.tolerance] for fixture, r in results]
    return ResultTable(("fixture", "check", "status", "residual", "tolerance"), ("", "", "", "1", "1"), rows,
                       meta or {})
