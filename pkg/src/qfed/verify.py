"""Exact relations of the theory packaged as runnable checks with residuals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dos import DEFAULT_LOSS_FLOOR, IF_E, IF_M, abs_ifdos_integrals, integrate_sources, kernel_integrals, require_integrable
from .fixtures import Fixture, canonical_fixtures, sample_pairs, sample_points
from .greens import LayeredGreens
from .model import CONSTANTS, PhysicalConstants, Stack, locate
from .observables import SpectralPoint
from .quadrature import QuadratureSpec


@dataclass(frozen=True)
class CheckReport:
    name: str
    residual: float
    tolerance: float
    passed: bool
    context: dict = field(default_factory=dict)
    ran: bool = True

    @property
    def status(self) -> str:
        if not self.ran:
            return "not-run"
        return "pass" if self.passed else "fail"


def _report(name, residual, tolerance, **context) -> CheckReport:
    residual = float(residual)
    return CheckReport(name, residual, tolerance, bool(residual <= tolerance), context)


def _not_run(name, tolerance, reason, **context) -> CheckReport:
    return CheckReport(name, math.nan, tolerance, False, dict(context, reason=reason), ran=False)


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def check_green_identity(stack: Stack, omega: float, x: float, xp: float, family: str = "e",
                         loss_floor: float = 0.0, quad: QuadratureSpec = QuadratureSpec(rtol=1e-10),
                         constants: PhysicalConstants = CONSTANTS, tolerance: float = 1e-6) -> CheckReport:
    """Im G_jj(x, x') against k0^2 times the source-weighted overlap of G(x, .) and G(x', .)."""
    if family not in ("e", "m"):
        raise ValueError(f"unknown family {family!r}")
    floored = stack.with_loss_floor(loss_floor)
    require_integrable(floored)
    gr = LayeredGreens(floored, omega, constants)
    lx, lxp = locate(floored, x), locate(floored, xp)

    def integrand_for_layer(L):
        ei, mi = gr.eps[L].imag, gr.mu[L].imag

        def f(y):
            a = gr.tensor(x, y, lx, L)
            b = gr.tensor(xp, y, lxp, L)
            if family == "e":
                v = ei * a.g_ee * np.conj(b.g_ee) + mi * a.g_em * np.conj(b.g_em)
            else:
                v = ei * a.g_me * np.conj(b.g_me) + mi * a.g_mm * np.conj(b.g_mm)
            return np.stack([v.real, v.imag], axis=-1)

        return f

    parts = integrate_sources(gr, [x, xp], integrand_for_layer, quad).sum(0)
    lhs = gr.k0**2 * complex(parts[0], parts[1])
    g = gr.tensor(x, xp, lx, lxp)
    im_g = (g.g_ee if family == "e" else g.g_mm).imag
    residual = abs(lhs - im_g) / abs(im_g) if im_g != 0 else abs(lhs)
    return _report(f"green-identity-{family}", residual, tolerance, omega=omega, x=x, xp=xp, loss_floor=loss_floor)


def check_reciprocity(stack: Stack, omega: float, pairs, constants: PhysicalConstants = CONSTANTS,
                      tolerance: float = 1e-10) -> CheckReport:
    """G_ee and G_mm symmetric, G_me(x, x') = -G_em(x', x); worst relative residual over ``pairs``."""
    gr = LayeredGreens(stack, omega, constants)
    worst = 0.0
    for x, xp in np.asarray(pairs, float).reshape(-1, 2):
        a = gr.tensor(x, xp)
        b = gr.tensor(xp, x)
        worst = max(worst, _rel(a.g_ee, b.g_ee), _rel(a.g_mm, b.g_mm), _rel(a.g_me, -b.g_em))
    return _report("reciprocity", worst, tolerance, omega=omega, samples=len(np.reshape(pairs, (-1, 2))))


def check_ifdos_zero(stack: Stack, omega: float, x: float, loss_floor: float = DEFAULT_LOSS_FLOOR,
                     quad: QuadratureSpec = QuadratureSpec(), constants: PhysicalConstants = CONSTANTS,
                     tolerance: float = 1e-8) -> CheckReport:
    """Integral of the IFDOS over all sources, relative to its L1 mass."""
    floored = stack.with_loss_floor(loss_floor)
    gr = LayeredGreens(floored, omega, constants)
    K = kernel_integrals(gr, x, quad)
    signed = float((K[:, IF_E] + K[:, IF_M]).sum())
    mass = float(abs_ifdos_integrals(gr, x, quad).sum())
    residual = abs(signed) / mass if mass > 0 else abs(signed)
    return _report("ifdos-zero", residual, tolerance, omega=omega, x=x, loss_floor=loss_floor)


def check_equilibrium(stack: Stack, omega: float, grid, loss_floor: float = DEFAULT_LOSS_FLOOR,
                      quad: QuadratureSpec = QuadratureSpec(), constants: PhysicalConstants = CONSTANTS,
                      tolerance: float = 1e-6) -> CheckReport:
    """At a uniform temperature every photon number equals eta and no energy flows.

    Photon numbers are compared relative to eta (absolutely when eta = 0),
    the flux and net emission relative to their L1 scales. The component
    residuals are kept in the report context.
    """
    sp = SpectralPoint(stack, omega, loss_floor, quad, constants)
    temps = {la.temperature for la in sp.stack.layers if la.lossy}
    if len(temps) > 1:
        return _not_run("equilibrium", tolerance, "temperatures are not uniform across the sources", omega=omega)
    eta = float(sp.eta[1:].max())
    n_res = s_res = q_res = 0.0
    for x in np.atleast_1d(np.asarray(grid, float)):
        pn = sp.photon_numbers(x)
        for j in ("e", "m", "tot"):
            n_res = max(n_res, abs(pn[j] - eta) / eta if eta > 0 else abs(pn[j]))
        s = sp.poynting(x)
        if s != 0:
            s_res = max(s_res, abs(s) / sp.poynting_scale(x))
        q = sp.net_emission(x)
        if q != 0:
            la = sp.stack.layer(locate(sp.stack, x))
            rho = sp.ldos(x)
            scale = constants.hbar * omega**2 * eta * (la.epsilon.imag * rho[0] + la.mu.imag * rho[1])
            q_res = max(q_res, abs(q) / (2 * scale))
    residual = max(n_res, s_res, q_res)
    return _report("equilibrium", residual, tolerance, omega=omega, eta=eta,
                   photon_number=n_res, poynting=s_res, net_emission=q_res)


def check_poynting_continuity(stack: Stack, omega: float, loss_floor: float = DEFAULT_LOSS_FLOOR,
                              quad: QuadratureSpec = QuadratureSpec(), constants: PhysicalConstants = CONSTANTS,
                              tolerance: float = 1e-8, noise_floor: float = 1e-6) -> CheckReport:
    """Flux evaluated on both sides of each interface.

    The mismatch is relative to the larger one-sided flux, but never to less
    than ``noise_floor`` times the flux L1 scale: where the flux itself
    cancels to nothing, rounding noise would otherwise dominate.
    """
    sp = SpectralPoint(stack, omega, loss_floor, quad, constants)
    worst = 0.0
    for l, xl in enumerate(sp.stack.interfaces, start=1):
        s_left = sp.poynting(xl, l)
        s_right = sp.poynting(xl, l + 1)
        scale = max(abs(s_left), abs(s_right))
        if scale < noise_floor * sp.poynting_scale(xl, l):
            scale = noise_floor * sp.poynting_scale(xl, l)
        if scale > 0:
            worst = max(worst, abs(s_left - s_right) / scale)
    return _report("poynting-continuity", worst, tolerance, omega=omega, interfaces=sp.stack.N)


def run_battery(fixtures: list[Fixture] | None = None, loss_floor: float = DEFAULT_LOSS_FLOOR,
                quad: QuadratureSpec = QuadratureSpec(), n_pairs: int = 20, n_points: int = 3,
                constants: PhysicalConstants = CONSTANTS) -> list[tuple[str, CheckReport]]:
    """Every check on every fixture; returns (fixture name, report) pairs in a fixed order."""
    fixtures = canonical_fixtures() if fixtures is None else fixtures
    out = []
    for fx in fixtures:
        omega = constants.omega_from_ev(fx.energy_ev)
        pairs = sample_pairs(fx.window, n_pairs)
        points = sample_points(fx.window, n_points)
        id_quad = QuadratureSpec(rtol=min(quad.rtol, 1e-10), atol=quad.atol, order=quad.order,
                                 max_intervals=quad.max_intervals)
        for family in ("e", "m"):
            reports = [check_green_identity(fx.stack, omega, x, xp, family, loss_floor, id_quad, constants)
                       for x, xp in pairs[:max(1, n_pairs // 4)]]
            worst = max(reports, key=lambda r: r.residual)
            out.append((fx.name, worst))
        out.append((fx.name, check_reciprocity(fx.stack, omega, pairs, constants)))
        ifz = [check_ifdos_zero(fx.stack, omega, x, loss_floor, quad, constants) for x in points]
        out.append((fx.name, max(ifz, key=lambda r: r.residual)))
        uniform = fx.stack.with_temperatures([300.0] * len(fx.stack.layers))
        out.append((fx.name, check_equilibrium(uniform, omega, points, loss_floor, quad, constants)))
        out.append((fx.name, check_poynting_continuity(fx.stack, omega, loss_floor, quad, constants)))
    return out
