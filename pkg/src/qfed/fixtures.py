"""Canonical structures used by the verification battery, tests and scripts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Layer, Stack

UM = 1e-6

CAVITY_ENERGY_EV = 0.119  # second resonance of the empty cavity
ELECTRIC_EMITTER = (1.1 + 0.1j, 1.0)
MAGNETIC_EMITTER = (1.0, 1.1 + 0.1j)
RANDOM_SEED = 20161221


@dataclass(frozen=True)
class Fixture:
    name: str
    stack: Stack
    energy_ev: float
    window: tuple[float, float]  # region (m) where sample points are drawn


def cavity(emitter: str | None = None, emitter_temperature: float = 300.0, surroundings: float = 0.0,
           wall_eps: complex = 10.0, wall_um: float = 1.0, gap_um: float = 10.0, emitter_um: float = 1.0) -> Stack:
    """Vacuum cavity between two dielectric walls, centred on x = 0.

    ``emitter`` is None (empty cavity), "electric" or "magnetic"; the emitter
    layer sits in the middle of the gap.
    """
    T0 = surroundings
    wall = Layer(wall_eps, 1.0, wall_um * UM, T0, "wall")
    lead = Layer(1.0, 1.0, None, T0, "vacuum")
    half = gap_um / 2
    if emitter is None:
        inner = [Layer(1.0, 1.0, gap_um * UM, T0, "gap")]
    else:
        if emitter not in ("electric", "magnetic"):
            raise ValueError(f"unknown emitter type {emitter!r}")
        eps, mu = ELECTRIC_EMITTER if emitter == "electric" else MAGNETIC_EMITTER
        side = (gap_um - emitter_um) / 2
        inner = [Layer(1.0, 1.0, side * UM, T0, "gap"),
                 Layer(eps, mu, emitter_um * UM, emitter_temperature, f"{emitter} emitter"),
                 Layer(1.0, 1.0, side * UM, T0, "gap")]
    layers = (lead, wall, *inner, wall, lead)
    return Stack(layers, origin=-(half + wall_um) * UM)


def homogeneous_lossy(temperature: float = 300.0) -> Stack:
    return Stack((Layer(2.0 + 0.3j, 1.2 + 0.1j, None, temperature, "medium"),))


def random_stack(seed: int = RANDOM_SEED, n_layers: int = 5, temperature: float | None = 300.0) -> Stack:
    """Random lossy stack with electric and magnetic loss in every layer.

    With ``temperature=None`` each layer gets a random temperature.
    """
    rng = np.random.default_rng(seed)
    layers = []
    for i in range(n_layers):
        eps = complex(rng.uniform(1.0, 6.0), rng.uniform(0.05, 0.5))
        mu = complex(rng.uniform(1.0, 2.0), rng.uniform(0.02, 0.3))
        thick = None if i in (0, n_layers - 1) else rng.uniform(0.3, 1.5) * UM
        T = rng.uniform(100, 600) if temperature is None else temperature
        layers.append(Layer(eps, mu, thick, T, f"random {i + 1}"))
    return Stack(tuple(layers))


def canonical_fixtures() -> list[Fixture]:
    rs = random_stack()
    cav = cavity("magnetic")
    return [
        Fixture("homogeneous", homogeneous_lossy(), 0.5, (-2 * UM, 2 * UM)),
        Fixture("cavity", cav, CAVITY_ENERGY_EV, (-8 * UM, 8 * UM)),
        Fixture("random", rs, 0.5, (rs.interfaces[0] - 1 * UM, rs.interfaces[-1] + 1 * UM)),
    ]


def sample_points(window: tuple[float, float], n: int, seed: int = RANDOM_SEED) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(window[0], window[1], n)


def sample_pairs(window: tuple[float, float], n: int, seed: int = RANDOM_SEED) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(window[0], window[1], (n, 2))
