"""Nonlocal, local and interference densities of states.

Integral-route quantities are assembled from *source-resolved* integrals:
for a field point x, each integrand component is integrated over the
source coordinate layer by layer. Interior layers use adaptive quadrature
with breakpoints at the interfaces and at the field point(s). In a
semi-infinite lead, beyond the last kink, every Green's function is a
single outgoing exponential exp(+-i k y), so any bilinear integrand decays
as exp(-2 Im(k) |y|) and its tail integral is h(y0) / (2 Im k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .greens import GreensSample, LayeredGreens
from .model import CONSTANTS, PhysicalConstants, Stack, locate
from .quadrature import QuadratureSpec, integrate

DEFAULT_LOSS_FLOOR = 1e-9

# raw source-resolved components, before the density-of-states prefactors
COMPONENTS = ("ee", "em", "me", "mm", "if_e", "if_m")
EE, EM, ME, MM, IF_E, IF_M = range(6)


class PreconditionError(ValueError):
    """An integral-route quantity was requested for an unbounded integral."""


class DegenerateError(ArithmeticError):
    """A local density of states vanishes where it is used as a denominator."""


@dataclass(frozen=True)
class NldosSample:
    e_from_e: float
    e_from_m: float
    m_from_e: float
    m_from_m: float
    tot_from_e: float
    tot_from_m: float

    @property
    def e(self):
        return self.e_from_e + self.e_from_m

    @property
    def m(self):
        return self.m_from_e + self.m_from_m

    @property
    def tot(self):
        return self.tot_from_e + self.tot_from_m


@dataclass(frozen=True)
class LdosSample:
    rho_e: float
    rho_m: float
    rho_tot: float
    source: str  # "imag" or "integral"


@dataclass(frozen=True)
class IfdosSample:
    value: float
    e_part: float
    m_part: float


def nldos_prefactor(omega, constants: PhysicalConstants = CONSTANTS):
    return 2 * omega**3 / (math.pi * constants.c**4 * constants.S)


def ifdos_prefactor(omega, n_r, constants: PhysicalConstants = CONSTANTS):
    return 2 * omega**2 * n_r / (math.pi * constants.c**4 * constants.S)


def nldos(g: GreensSample, eps_i, mu_i, omega, eps_x=1.0, mu_x=1.0,
          constants: PhysicalConstants = CONSTANTS) -> NldosSample:
    """Generalized NLDOS at (x, omega, x') from a Green's function sample.

    ``eps_i``/``mu_i`` are the loss parts at the source point, ``eps_x``/``mu_x``
    the material at the field point (they weight the total-field NLDOS).
    """
    p = nldos_prefactor(omega, constants)
    ee = p * eps_i * np.abs(g.g_ee) ** 2
    em = p * mu_i * np.abs(g.g_em) ** 2
    me = p * eps_i * np.abs(g.g_me) ** 2
    mm = p * mu_i * np.abs(g.g_mm) ** 2
    we, wm = abs(eps_x) / 2, abs(mu_x) / 2
    return NldosSample(ee, em, me, mm, we * ee + wm * me, we * em + wm * mm)


def ifdos(g: GreensSample, eps_i, mu_i, omega, n_r, constants: PhysicalConstants = CONSTANTS) -> IfdosSample:
    p = ifdos_prefactor(omega, n_r, constants)
    e_part = p * eps_i * np.real(1j * omega * g.g_ee * np.conj(g.g_me))
    m_part = p * mu_i * np.real(1j * omega * g.g_mm * np.conj(g.g_em))
    return IfdosSample(e_part + m_part, e_part, m_part)


def ldos(stack: Stack, omega: float, x, constants: PhysicalConstants = CONSTANTS,
         greens: LayeredGreens | None = None) -> LdosSample:
    """LDOS from the imaginary parts of G_ee(x, x) and G_mm(x, x)."""
    gr = greens if greens is not None else LayeredGreens(stack, omega, constants)
    l = locate(stack, x)
    g = gr.tensor(x, x, l, l)
    pre = 2 * omega / (math.pi * constants.c**2 * constants.S)
    rho_e = pre * g.g_ee.imag
    rho_m = pre * g.g_mm.imag
    la = stack.layer(l)
    return LdosSample(rho_e, rho_m, abs(la.epsilon) / 2 * rho_e + abs(la.mu) / 2 * rho_m, "imag")


def ldos_profile(stack: Stack, omega: float, xs, constants: PhysicalConstants = CONSTANTS) -> np.ndarray:
    """Imaginary-part LDOS on a grid; returns an array (len(xs), 3) of rho_e, rho_m, rho_tot."""
    gr = LayeredGreens(stack, omega, constants)
    out = np.empty((len(xs), 3))
    for i, x in enumerate(xs):
        s = ldos(stack, omega, x, constants, gr)
        out[i] = s.rho_e, s.rho_m, s.rho_tot
    return out


# -- source-resolved integration --------------------------------------------

def _kernel_integrand(gr: LayeredGreens, x: float, lx: int, ly: int):
    eps_i, mu_i = gr.eps[ly].imag, gr.mu[ly].imag
    w = gr.omega

    def f(y):
        g = gr.tensor(x, y, lx, ly)
        out = np.empty((len(y), 6))
        out[:, EE] = eps_i * np.abs(g.g_ee) ** 2
        out[:, EM] = mu_i * np.abs(g.g_em) ** 2
        out[:, ME] = eps_i * np.abs(g.g_me) ** 2
        out[:, MM] = mu_i * np.abs(g.g_mm) ** 2
        out[:, IF_E] = eps_i * np.real(1j * w * g.g_ee * np.conj(g.g_me))
        out[:, IF_M] = mu_i * np.real(1j * w * g.g_mm * np.conj(g.g_em))
        return out

    return f


def _abs_ifdos_integrand(gr: LayeredGreens, x: float, lx: int, ly: int):
    kern = _kernel_integrand(gr, x, lx, ly)

    def f(y):
        k = kern(y)
        return np.abs(k[:, IF_E] + k[:, IF_M])[:, None]

    return f


def integrate_sources(gr: LayeredGreens, kinks, integrand_for_layer, spec: QuadratureSpec = QuadratureSpec()):
    """Integrate over every source layer; returns an array (N+2, m), row l = layer l.

    ``integrand_for_layer(l)`` returns f(y) -> (len(y), m) for sources in
    layer l. ``kinks`` are the field points at which the integrand has a
    kink in y. Layers without loss are skipped (their weight is zero).
    """
    stack = gr.stack
    N = stack.N
    xs = stack.bounds
    kinks = np.atleast_1d(np.asarray(kinks, float))
    rows = {}
    width = None
    for L in range(1, N + 2):
        if gr.eps[L].imag == 0 and gr.mu[L].imag == 0:
            continue
        lo, hi = xs[L - 1], xs[L]
        inner = sorted(p for p in kinks if lo < p < hi)
        f = integrand_for_layer(L)
        a = lo if np.isfinite(lo) else (inner[0] if inner else hi)
        b = hi if np.isfinite(hi) else (inner[-1] if inner else lo)
        total = 0.0
        if b > a:
            total = integrate(f, [a, *inner, b], spec)
        k = gr.freq.k[L]
        kappa = k.imag
        # sample strictly inside the tail: the edge may coincide with a kink
        step = 0.25 / abs(k)
        for edge, sign, open_end in ((a, -1, not np.isfinite(lo)), (b, 1, not np.isfinite(hi))):
            if not open_end:
                continue
            if kappa <= 0:
                raise PreconditionError(
                    f"layer {L} is a lossless semi-infinite lead; add a loss floor for integral-route quantities")
            h = f(np.array([edge + sign * step]))[0]
            total = total + h * np.exp(2 * kappa * step) / (2 * kappa)
        rows[L] = np.asarray(total, float)
        width = rows[L].shape
    if width is None:
        width = np.asarray(integrand_for_layer(1)(np.array([0.0 if N == 0 else xs[1]])))[0].shape
    out = np.zeros((N + 2,) + width)
    for L, v in rows.items():
        out[L] = v
    return out


def require_integrable(stack: Stack):
    for L in {1, stack.N + 1}:
        la = stack.layer(L)
        if la.n.imag <= 0:
            raise PreconditionError(
                f"layer {L} is a lossless semi-infinite lead; add a loss floor for integral-route quantities")


def kernel_integrals(gr: LayeredGreens, x: float, spec: QuadratureSpec = QuadratureSpec(), lx: int | None = None):
    """Per-source-layer integrals of the six raw kernel components at field point x."""
    require_integrable(gr.stack)
    lx = locate(gr.stack, x) if lx is None else lx
    return integrate_sources(gr, [x], lambda L: _kernel_integrand(gr, x, lx, L), spec)


def abs_ifdos_integrals(gr: LayeredGreens, x: float, spec: QuadratureSpec = QuadratureSpec(), lx: int | None = None):
    """Per-source-layer integrals of |IFDOS| without prefactor (an L1 scale)."""
    require_integrable(gr.stack)
    lx = locate(gr.stack, x) if lx is None else lx
    return integrate_sources(gr, [x], lambda L: _abs_ifdos_integrand(gr, x, lx, L), spec)[:, 0]


def ldos_integral(stack: Stack, omega: float, x, quad: QuadratureSpec = QuadratureSpec(),
                  loss_floor: float = DEFAULT_LOSS_FLOOR, constants: PhysicalConstants = CONSTANTS) -> LdosSample:
    """LDOS as the integral of the NLDOS over all source positions."""
    floored = stack.with_loss_floor(loss_floor)
    gr = LayeredGreens(floored, omega, constants)
    K = kernel_integrals(gr, x, quad).sum(0)
    p = nldos_prefactor(omega, constants)
    rho_e = p * (K[EE] + K[EM])
    rho_m = p * (K[ME] + K[MM])
    la = floored.layer(locate(floored, x))
    return LdosSample(rho_e, rho_m, abs(la.epsilon) / 2 * rho_e + abs(la.mu) / 2 * rho_m, "integral")
