"""Acceptance criteria 1-12; each test prints one PASS/FAIL line."""

import time

import numpy as np
import pytest
from scipy.signal import argrelextrema

from qfed import CONSTANTS, Layer, LayeredGreens, SpectralPoint, Stack, build_ladder, frequency_sample, ldos_profile
from qfed.dos import ldos_integral
from qfed.fixtures import (CAVITY_ENERGY_EV, UM, canonical_fixtures, cavity, homogeneous_lossy, random_stack,
                           sample_pairs, sample_points)
from qfed.verify import (check_equilibrium, check_green_identity, check_ifdos_zero, check_poynting_continuity,
                         check_reciprocity)

W119 = CONSTANTS.omega_from_ev(CAVITY_ENERGY_EV)
W05 = CONSTANTS.omega_from_ev(0.5)
EXTERIOR = (-9.0e-6, -7.0e-6, 7.0e-6, 9.0e-6)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance {number:2d}] {'PASS' if ok else 'FAIL'} {title}: {detail}")
        assert ok, f"criterion {number} ({title}) failed: {detail}"

    return emit


def rand_window(stack):
    return stack.interfaces[0] - 1 * UM, stack.interfaces[-1] + 1 * UM


def gap_structure(x, rho_e, rho_m):
    maxima = argrelextrema(rho_e, np.greater)[0]
    between = (x > x[maxima].min()) & (x < x[maxima].max()) if len(maxima) == 2 else np.zeros_like(x, bool)
    spacing = x[1] - x[0]
    centre_min = bool(between.any() and abs(x[between][np.argmin(rho_e[between])]) <= spacing)
    centre_max_m = abs(x[np.argmax(rho_m)]) <= spacing
    return len(maxima), centre_min, centre_max_m


def exterior_ratio(loss_floor):
    n = {}
    for emitter in ("magnetic", "electric"):
        sp = SpectralPoint(cavity(emitter), W119, loss_floor)
        n[emitter] = np.array([sp.photon_numbers(x).n_tot for x in EXTERIOR])
    return n["magnetic"] / n["electric"], n


def test_criterion_01_cavity_wall_reflectance(report):
    t0 = time.perf_counter()
    slab = Stack((Layer(), Layer(10.0, 1.0, 1 * UM), Layer()))
    R2 = abs(build_ladder(slab, frequency_sample(slab, W119)).e.R[1]) ** 2
    dt = time.perf_counter() - t0
    report(1, "cavity-wall reflectance", abs(R2 - 0.64) <= 0.005 and dt < 1.0, f"|R|^2 = {R2:.6f}, {dt:.3f} s")


def test_criterion_02_cavity_ldos_structure(report):
    t0 = time.perf_counter()
    stack = cavity(None)
    x = np.linspace(-4.99 * UM, 4.99 * UM, 500)
    rho = ldos_profile(stack, W119, x)
    n_max, centre_min, centre_max_m = gap_structure(x, rho[:, 0], rho[:, 1])
    dt = time.perf_counter() - t0
    ok = n_max == 2 and centre_min and centre_max_m and dt < 10.0
    report(2, "cavity LDOS structure", ok,
           f"{n_max} rho_e maxima, centre rho_e minimum {centre_min}, centre rho_m maximum {centre_max_m}, {dt:.2f} s")


def test_criterion_03_magnetic_emitter_photon_number(report):
    t0 = time.perf_counter()
    ratio, _ = exterior_ratio(1e-9)
    dt = time.perf_counter() - t0
    ok = bool(np.all(ratio > 1.5)) and dt < 30.0
    report(3, "magnetic vs electric emitter", ok, f"exterior n_tot ratio {ratio.min():.3f}..{ratio.max():.3f}, {dt:.2f} s")


def test_criterion_04_green_identities(report):
    worst = 0.0
    for stack, omega in ((homogeneous_lossy(), W05), (random_stack(), W05)):
        win = rand_window(stack) if stack.N else (-2 * UM, 2 * UM)
        for x, xp in sample_pairs(win, 20, seed=4):
            for fam in "em":
                worst = max(worst, check_green_identity(stack, omega, x, xp, fam).residual)
    report(4, "Green integral identities", worst < 1e-6, f"max residual {worst:.2e} over 2 x 20 x 2 cases")


def test_criterion_05_reciprocity(report):
    stack = random_stack()
    r = check_reciprocity(stack, W05, sample_pairs(rand_window(stack), 100, seed=5))
    report(5, "reciprocity", r.residual < 1e-10, f"max residual {r.residual:.2e} over 100 pairs")


def test_criterion_06_ifdos_zero(report):
    worst = 0.0
    for fx in canonical_fixtures():
        omega = CONSTANTS.omega_from_ev(fx.energy_ev)
        for x in sample_points(fx.window, 5, seed=6):
            worst = max(worst, check_ifdos_zero(fx.stack, omega, x).residual)
    report(6, "IFDOS zero integral", worst < 1e-8, f"max residual {worst:.2e} on 3 fixtures")


def test_criterion_07_equilibrium(report):
    stack = random_stack(temperature=300.0)
    r = check_equilibrium(stack, W05, sample_points(rand_window(stack), 8, seed=7))
    c = r.context
    ok = r.ran and c["photon_number"] < 1e-6 and c["poynting"] < 1e-8 and c["net_emission"] < 1e-8
    report(7, "equilibrium battery", ok,
           f"n {c['photon_number']:.1e}, s {c['poynting']:.1e}, q {c['net_emission']:.1e}")


def test_criterion_08_poynting_continuity(report):
    r = check_poynting_continuity(cavity("magnetic"), W119)
    report(8, "Poynting continuity", r.residual < 1e-8, f"max mismatch {r.residual:.2e}")


def test_criterion_09_duality(report):
    stack = random_stack(temperature=None)
    a, b = SpectralPoint(stack, W05), SpectralPoint(stack.swapped(), W05)
    worst = 0.0
    for x in sample_points(rand_window(stack), 10, seed=9):
        ra, rb = a.ldos(x), b.ldos(x)
        na, nb = a.photon_numbers(x), b.photon_numbers(x)
        for u, v in ((ra[0], rb[1]), (ra[1], rb[0]), (na.n_e, nb.n_m), (na.n_m, nb.n_e)):
            worst = max(worst, abs(u - v) / max(abs(u), abs(v)))
    report(9, "duality", worst < 1e-10, f"max relative difference {worst:.2e}")


def test_criterion_10_derivative_route(report):
    stack = random_stack()
    gr = LayeredGreens(stack, W05)
    worst = 0.0
    for x, xp in sample_pairs(rand_window(stack), 50, seed=10):
        a, b = gr.g_mm_from_ee(x, xp), gr.tensor(x, xp).g_mm
        worst = max(worst, abs(a - b) / abs(b))
    report(10, "derivative-route G_mm", worst < 1e-8, f"max relative difference {worst:.2e} over 50 samples")


def test_criterion_11_homogeneous_closed_forms(report):
    worst = 0.0
    rng = np.random.default_rng(11)
    for eps, mu in ((1.0, 1.0), (2 + 0.3j, 1.2 + 0.1j), (4.0, 0.5 + 0.2j)):
        stack = Stack.homogeneous(eps, mu)
        gr = LayeredGreens(stack, W05)
        k = gr.freq.k[1]
        for x, xp in rng.uniform(-3 * UM, 3 * UM, (10, 2)):
            g = gr.tensor(x, xp)
            base = 1j * np.exp(1j * k * abs(x - xp)) / (2 * k)
            worst = max(worst, abs(g.g_ee - mu * base) / abs(mu * base), abs(g.g_mm - eps * base) / abs(eps * base))
    report(11, "homogeneous closed forms", worst < 1e-12, f"max relative difference {worst:.2e}")


def test_criterion_12_loss_floor_stability(report):
    stack = cavity(None)
    x = np.linspace(-4.95 * UM, 4.95 * UM, 101)
    prof = {}
    for delta in (1e-8, 1e-10):
        prof[delta] = np.array([[s.rho_e, s.rho_m] for s in (ldos_integral(stack, W119, xi, loss_floor=delta) for xi in x)])
    ldos_change = float(np.max(np.abs(prof[1e-8] - prof[1e-10]) / np.abs(prof[1e-10])))
    structure = [gap_structure(x, p[:, 0], p[:, 1]) for p in prof.values()]
    ratios = {d: exterior_ratio(d) for d in (1e-8, 1e-10)}
    n_change = max(float(np.max(np.abs(ratios[1e-8][1][e] / ratios[1e-10][1][e] - 1))) for e in ("magnetic", "electric"))
    ok = (ldos_change < 1e-3 and n_change < 1e-3 and all(s == (2, True, True) for s in structure)
          and all(np.all(r[0] > 1.5) for r in ratios.values()))
    report(12, "loss-floor stability", ok, f"LDOS change {ldos_change:.1e}, photon-number change {n_change:.1e}")
