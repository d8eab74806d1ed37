"""Electric, magnetic and total LDOS across the empty cavity at its second resonance.

Writes a CSV (x in um, densities in units of 2/(pi c S)) and prints the
extremum structure of rho_e and rho_m inside the vacuum gap.
"""

import argparse
import sys

import numpy as np
from scipy.signal import argrelextrema

from qfed import CONSTANTS, ldos_profile
from qfed.fixtures import CAVITY_ENERGY_EV, UM, cavity


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--energy-ev", type=float, default=CAVITY_ENERGY_EV)
    p.add_argument("--points", type=int, default=500)
    p.add_argument("--out", default="-")
    a = p.parse_args(argv)

    stack = cavity(None)
    omega = CONSTANTS.omega_from_ev(a.energy_ev)
    xs = np.linspace(-8 * UM, 8 * UM, a.points)
    rho = ldos_profile(stack, omega, xs) / CONSTANTS.ldos_unit
    out = sys.stdout if a.out == "-" else open(a.out, "w")
    out.write("x_um,rho_e,rho_m,rho_tot\n")
    for x, r in zip(xs, rho):
        out.write(f"{x / UM:.6f},{r[0]:.10e},{r[1]:.10e},{r[2]:.10e}\n")
    if out is not sys.stdout:
        out.close()

    gap = (xs > stack.interfaces[1]) & (xs < stack.interfaces[2])
    g, re, rm = xs[gap] / UM, rho[gap, 0], rho[gap, 1]
    print(f"rho_e maxima at x = {np.round(g[argrelextrema(re, np.greater)[0]], 3)} um", file=sys.stderr)
    inner = np.abs(g) < 2.0
    print(f"rho_e minimum between the maxima at x = {g[inner][np.argmin(re[inner])]:.3f} um", file=sys.stderr)
    print(f"rho_m maximum at x = {g[np.argmax(rm)]:.3f} um", file=sys.stderr)


if __name__ == "__main__":
    main()
