"""Photon numbers across the cavity for a hot electric or magnetic emitter.

The emitter (1 um, centred) is at 300 K, everything else at 0 K. Prints
n_e, n_m and n_tot on a grid and the exterior n_tot ratio between the
magnetic and electric emitters.
"""

import argparse

import numpy as np

from qfed import CONSTANTS, SpectralPoint
from qfed.fixtures import CAVITY_ENERGY_EV, UM, cavity


def profile(emitter, omega, xs, delta):
    sp = SpectralPoint(cavity(emitter), omega, loss_floor=delta)
    return np.array([[sp.photon_numbers(x)[j] for j in ("e", "m", "tot")] for x in xs])


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--energy-ev", type=float, default=CAVITY_ENERGY_EV)
    p.add_argument("--points", type=int, default=81)
    p.add_argument("--delta", type=float, default=1e-9)
    a = p.parse_args(argv)

    omega = CONSTANTS.omega_from_ev(a.energy_ev)
    xs = np.linspace(-8 * UM, 8 * UM, a.points)
    res = {e: profile(e, omega, xs, a.delta) for e in ("electric", "magnetic")}
    print("x_um,electric_n_e,electric_n_m,electric_n_tot,magnetic_n_e,magnetic_n_m,magnetic_n_tot")
    for i, x in enumerate(xs):
        vals = ",".join(f"{v:.8e}" for v in (*res["electric"][i], *res["magnetic"][i]))
        print(f"{x / UM:.4f},{vals}")
    outside = xs < -6 * UM
    ratio = res["magnetic"][outside, 2].mean() / res["electric"][outside, 2].mean()
    print(f"# exterior n_tot ratio magnetic/electric = {ratio:.3f}")


if __name__ == "__main__":
    main()
