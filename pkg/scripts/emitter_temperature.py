"""Steady-state temperature of a cavity emitter heated only by a hot wall.

The left wall is given a small loss and a fixed temperature; the emitter
settles where its band-integrated net emission vanishes.
"""

import argparse

from qfed import CONSTANTS, steady_state_temperature
from qfed.fixtures import cavity


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--emitter", choices=("electric", "magnetic"), default="magnetic")
    p.add_argument("--wall-temperature", type=float, default=500.0)
    p.add_argument("--band-ev", type=float, nargs=2, default=(0.11, 0.13))
    a = p.parse_args(argv)

    stack = cavity(a.emitter, emitter_temperature=0.0).with_layer(2, epsilon=10 + 0.5j, temperature=a.wall_temperature)
    band = tuple(CONSTANTS.omega_from_ev(e) for e in a.band_ev)
    T = steady_state_temperature(stack, 4, band)
    print(f"{a.emitter} emitter steady-state temperature: {T:.3f} K (hot wall at {a.wall_temperature} K)")


if __name__ == "__main__":
    main()
