import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qfed import CONSTANTS, Layer, LayeredGreens, PreconditionError, Stack, ifdos, ldos, ldos_integral, ldos_profile, nldos
from qfed.dos import IF_E, IF_M, abs_ifdos_integrals, integrate_sources, kernel_integrals, nldos_prefactor
from qfed.fixtures import UM, cavity
from qfed.quadrature import QuadratureSpec, integrate

from conftest import energies, lossy_stacks, window

UNIT = CONSTANTS.ldos_unit
W119 = CONSTANTS.omega_from_ev(0.119)


def test_nldos_lossless_source_is_zero():
    stack = Stack((Layer(2.0 + 0.3j), Layer(3.0, 1.0, 1 * UM), Layer()))
    g = LayeredGreens(stack, W119).tensor(-0.2e-6, 0.5e-6)
    s = nldos(g, 0.0, 0.0, W119)
    assert (s.e_from_e, s.e_from_m, s.m_from_e, s.m_from_m, s.tot_from_e, s.tot_from_m) == (0,) * 6
    assert ifdos(g, 0.0, 0.0, W119, 1.0).value == 0


def test_nldos_homogeneous_closed_form():
    eps, mu = 2 + 0.3j, 1.2 + 0.1j
    stack = Stack.homogeneous(eps, mu)
    w = CONSTANTS.omega_from_ev(0.5)
    k = w / CONSTANTS.c * stack.layer(1).n
    g = LayeredGreens(stack, w).tensor(0.0, 0.0)
    s = nldos(g, eps.imag, mu.imag, w, eps, mu)
    expected = 2 * w**3 / (math.pi * CONSTANTS.c**4) * eps.imag * abs(mu * 1j / (2 * k)) ** 2
    assert s.e_from_e == pytest.approx(expected, rel=1e-12)
    assert s.tot_from_e == pytest.approx(abs(eps) / 2 * s.e_from_e + abs(mu) / 2 * s.m_from_e, rel=1e-14)


@given(lossy_stacks(2, 5), energies, st.data())
def test_nldos_duality(stack, omega, data):
    lo, hi = window(stack)
    x, xp = data.draw(st.floats(lo, hi)), data.draw(st.floats(lo, hi))
    src = stack.layer(int(np.searchsorted(stack.interfaces, xp, side="left") + 1))
    a = nldos(LayeredGreens(stack, omega).tensor(x, xp), src.epsilon.imag, src.mu.imag, omega)
    b = nldos(LayeredGreens(stack.swapped(), omega).tensor(x, xp), src.mu.imag, src.epsilon.imag, omega)
    for u, v in [(a.e_from_e, b.m_from_m), (a.e_from_m, b.m_from_e), (a.m_from_e, b.e_from_m), (a.m_from_m, b.e_from_e)]:
        assert u == pytest.approx(v, rel=1e-9, abs=1e-300)


@given(lossy_stacks(2, 5), energies, st.data())
def test_nldos_nonnegative_and_tot_weighting(stack, omega, data):
    lo, hi = window(stack)
    x, xp = data.draw(st.floats(lo, hi)), data.draw(st.floats(lo, hi))
    gr = LayeredGreens(stack, omega)
    la = stack.layer(int(np.searchsorted(stack.interfaces, x, side="left") + 1))
    src = stack.layer(int(np.searchsorted(stack.interfaces, xp, side="left") + 1))
    s = nldos(gr.tensor(x, xp), src.epsilon.imag, src.mu.imag, omega, la.epsilon, la.mu)
    vals = (s.e_from_e, s.e_from_m, s.m_from_e, s.m_from_m, s.tot_from_e, s.tot_from_m)
    assert all(v >= 0 for v in vals)
    assert s.tot == pytest.approx(abs(la.epsilon) / 2 * s.e + abs(la.mu) / 2 * s.m, rel=1e-12)
    f = ifdos(gr.tensor(x, xp), src.epsilon.imag, src.mu.imag, omega, la.n.real)
    assert f.value == f.e_part + f.m_part
    r = ldos(stack, omega, x)
    assert r.rho_e >= 0 and r.rho_m >= 0


def test_vacuum_ldos_is_half_unit():
    for ev in (0.05, 0.119, 2.0):
        s = ldos(Stack.homogeneous(), CONSTANTS.omega_from_ev(ev), 1e-6)
        assert s.rho_e / UNIT == pytest.approx(0.5, rel=1e-14)
        assert s.rho_m / UNIT == pytest.approx(0.5, rel=1e-14)
        assert s.rho_e == pytest.approx(1 / (math.pi * CONSTANTS.c), rel=1e-14)


def test_cavity_center_extrema():
    stack = cavity(None)
    xs = np.linspace(-4.99e-6, 4.99e-6, 999)
    prof = ldos_profile(stack, W119, xs)
    centre = ldos(stack, W119, 0.0)
    assert centre.rho_e <= prof[:, 0].min() * (1 + 1e-12)
    assert centre.rho_m >= prof[:, 1].max() * (1 - 1e-12)
    assert prof.shape == (999, 3)


def test_homogeneous_lossy_both_routes():
    eps, mu = 2 + 0.3j, 1.2 + 0.1j
    stack = Stack.homogeneous(eps, mu)
    w = CONSTANTS.omega_from_ev(0.5)
    k = w / CONSTANTS.c * stack.layer(1).n
    expected = 2 * w / (math.pi * CONSTANTS.c**2) * (mu * 1j / (2 * k)).imag
    assert ldos(stack, w, 0.0).rho_e == pytest.approx(expected, rel=1e-12)
    assert ldos_integral(stack, w, 0.0).rho_e == pytest.approx(expected, rel=1e-8)


@settings(max_examples=10)
@given(lossy_stacks(4, 4), energies, st.data())
def test_integral_route_matches_imaginary_route(stack, omega, data):
    lo, hi = window(stack)
    x = data.draw(st.floats(lo, hi))
    a, b = ldos(stack, omega, x), ldos_integral(stack, omega, x)
    for u, v in [(a.rho_e, b.rho_e), (a.rho_m, b.rho_m), (a.rho_tot, b.rho_tot)]:
        assert u == pytest.approx(v, rel=1e-6)


def test_lossless_structure_is_floor_independent():
    stack = cavity(None)
    for x in (-7e-6, -5.5e-6, 0.0, 2.3e-6):
        a = ldos_integral(stack, W119, x, loss_floor=1e-8)
        b = ldos_integral(stack, W119, x, loss_floor=1e-10)
        assert a.rho_e == pytest.approx(b.rho_e, rel=1e-4)
        assert a.rho_m == pytest.approx(b.rho_m, rel=1e-4)
        exact = ldos(stack, W119, x)
        assert b.rho_tot == pytest.approx(exact.rho_tot, rel=1e-4)


def test_lossless_leads_need_floor():
    with pytest.raises(PreconditionError):
        ldos_integral(cavity(None), W119, 0.0, loss_floor=0.0)


@given(lossy_stacks(2, 5), energies, st.data())
@settings(max_examples=10)
def test_ifdos_integrates_to_zero(stack, omega, data):
    lo, hi = window(stack)
    x = data.draw(st.floats(lo, hi))
    gr = LayeredGreens(stack, omega)
    K = kernel_integrals(gr, x)
    mass = abs_ifdos_integrals(gr, x).sum()
    assert abs((K[:, IF_E] + K[:, IF_M]).sum()) <= 1e-8 * mass


def test_homogeneous_ifdos_half_axes_cancel():
    eps, mu = 2 + 0.3j, 1.2 + 0.1j
    stack = Stack.homogeneous(eps, mu)
    w = CONSTANTS.omega_from_ev(0.5)
    gr = LayeredGreens(stack, w)
    n_r = stack.layer(1).n.real

    def f(y):
        return ifdos(gr.tensor(0.0, y, 1, 1), eps.imag, mu.imag, w, n_r).value

    decay = 1 / (w / CONSTANTS.c * stack.layer(1).n.imag)
    left = integrate(f, [-40 * decay, 0.0])
    right = integrate(f, [0.0, 40 * decay])
    assert abs(left + right) <= 1e-10 * abs(left)
    assert right < 0 < left  # sources on the left push energy towards +x
    np.testing.assert_allclose(f(np.array([1e-7, 3e-7])), -f(np.array([-1e-7, -3e-7])), rtol=1e-12)


def test_integrate_sources_rows_per_layer():
    stack = Stack((Layer(2 + 0.3j), Layer(3.0, 1.0, 1 * UM), Layer(1.5 + 0.1j, 1.2)))
    gr = LayeredGreens(stack, W119)
    K = kernel_integrals(gr, 0.5e-6)
    assert K.shape == (4, 6)
    assert np.all(K[0] == 0) and np.all(K[2] == 0)
    assert np.all(K[[1, 3]][:, :4] >= 0)
