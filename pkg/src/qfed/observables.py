"""Photon numbers, field fluctuations, Poynting flux, net emission and thermal balance.

Everything here is built from the source-resolved kernel integrals of
:mod:`qfed.dos`. Temperatures are piecewise constant, so every
eta-weighted integral reduces to a sum over layers of (occupation of the
layer) x (kernel integral over the layer).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .dos import (
    DEFAULT_LOSS_FLOOR, EE, EM, IF_E, IF_M, ME, MM, DegenerateError, PreconditionError,
    abs_ifdos_integrals, kernel_integrals, nldos_prefactor,
)
from .greens import LayeredGreens
from .model import CONSTANTS, PhysicalConstants, Stack, bose_einstein, locate
from .quadrature import QuadratureSpec, gauss_legendre, integrate

FIELDS = ("e", "m", "tot")


@dataclass(frozen=True)
class PhotonNumbers:
    n_e: float
    n_m: float
    n_tot: float

    def __getitem__(self, j):
        return getattr(self, f"n_{j}")


@dataclass(frozen=True)
class FluctuationSample:
    e_sq: float
    h_sq: float
    u: float


@dataclass(frozen=True)
class FluxSample:
    s: float
    q: float


@dataclass(frozen=True)
class LadderKernel:
    """Weight profiles of the field-j ladder operator at one (x, omega).

    ``w_e``/``w_m`` are sampled on ``grid``; ``layer_e``/``layer_m`` hold
    the integrals of w_e^2 and w_m^2 over each source layer (row l is
    layer l), whose total is the normalization.
    """

    grid: np.ndarray
    w_e: np.ndarray
    w_m: np.ndarray
    layer_e: np.ndarray
    layer_m: np.ndarray

    @property
    def norm(self) -> float:
        return float(self.layer_e.sum() + self.layer_m.sum())


class SpectralPoint:
    """Observables of ``stack`` at one angular frequency.

    Integral-route quantities use the stack with its lossless leads given
    an imaginary part ``loss_floor``; per-field-point kernel integrals are
    cached.
    """

    def __init__(self, stack: Stack, omega: float, loss_floor: float = DEFAULT_LOSS_FLOOR,
                 quad: QuadratureSpec = QuadratureSpec(), constants: PhysicalConstants = CONSTANTS):
        self.exact = stack
        self.stack = stack.with_loss_floor(loss_floor)
        self.omega = omega
        self.quad = quad
        self.constants = constants
        self.greens = LayeredGreens(self.stack, omega, constants)
        temps = np.array([0.0] + [la.temperature for la in self.stack.layers])
        self.eta = bose_einstein(omega, temps, constants)
        self.eta[0] = 0.0
        self._kernels = {}

    def _layer(self, x, lx):
        return locate(self.stack, x) if lx is None else lx

    def kernels(self, x, lx=None) -> np.ndarray:
        lx = self._layer(x, lx)
        key = (float(x), lx)
        if key not in self._kernels:
            self._kernels[key] = kernel_integrals(self.greens, x, self.quad, lx)
        return self._kernels[key]

    def _weights(self, x, lx=None):
        """Per-layer integrals of rho_NL,j for j = e, m, tot; shape (3, N+2)."""
        lx = self._layer(x, lx)
        K = self.kernels(x, lx)
        p = nldos_prefactor(self.omega, self.constants)
        de = p * (K[:, EE] + K[:, EM])
        dm = p * (K[:, ME] + K[:, MM])
        la = self.stack.layer(lx)
        return np.array([de, dm, abs(la.epsilon) / 2 * de + abs(la.mu) / 2 * dm])

    def ldos(self, x, lx=None) -> np.ndarray:
        """Integral-route (rho_e, rho_m, rho_tot)."""
        return self._weights(x, lx).sum(1)

    def photon_numbers(self, x, lx=None) -> PhotonNumbers:
        D = self._weights(x, lx)
        den = D.sum(1)
        if not np.all(den > 0):
            raise DegenerateError(f"local density of states vanishes at x = {x!r}")
        return PhotonNumbers(*(D @ self.eta / den))

    def weighted_mean_n_tot(self, x, lx=None) -> float:
        """Mean of n_e and n_m weighted by |eps|/2 rho_e and |mu|/2 rho_m.

        A diagnostic to set beside ``photon_numbers(x).n_tot``; the two agree
        because the total NLDOS is linear in its e and m parts.
        """
        lx = self._layer(x, lx)
        la = self.stack.layer(lx)
        D = self._weights(x, lx)
        rho = D.sum(1)
        num = D @ self.eta
        a, b = abs(la.epsilon) / 2 * rho[0], abs(la.mu) / 2 * rho[1]
        return float((a * num[0] / rho[0] + b * num[1] / rho[1]) / (a + b))

    def fluctuations(self, x, lx=None) -> FluctuationSample:
        D = self._weights(x, lx)
        rho = D.sum(1)
        num = D @ self.eta
        hw = self.constants.hbar * self.omega
        return FluctuationSample(
            e_sq=hw / self.constants.eps0 * (num[0] + rho[0] / 2),
            h_sq=hw / self.constants.mu0 * (num[1] + rho[1] / 2),
            u=hw * (num[2] + rho[2] / 2),
        )

    def _flux_prefactor(self):
        # hbar w v(x) times the IFDOS prefactor; v n_r = c cancels exactly
        c, S = self.constants.c, self.constants.S
        return self.constants.hbar * self.omega * c * 2 * self.omega**2 / (math.pi * c**4 * S)

    def poynting(self, x, lx=None) -> float:
        K = self.kernels(x, lx)
        return float(self._flux_prefactor() * ((K[:, IF_E] + K[:, IF_M]) @ self.eta))

    def poynting_scale(self, x, lx=None) -> float:
        """hbar w v integral |rho_IF| eta dx', the natural magnitude of the flux."""
        A = abs_ifdos_integrals(self.greens, x, self.quad, self._layer(x, lx))
        return float(self._flux_prefactor() * (A @ self.eta))

    def net_emission(self, x, lx=None) -> float:
        lx = self._layer(x, lx)
        la = self.stack.layer(lx)
        ei, mi = la.epsilon.imag, la.mu.imag
        if ei == 0 and mi == 0:
            return 0.0
        D = self._weights(x, lx)
        rho = D.sum(1)
        num = D @ self.eta
        eta = self.eta[lx]
        return float(self.constants.hbar * self.omega**2 * (ei * (rho[0] * eta - num[0]) + mi * (rho[1] * eta - num[1])))

    def flux(self, x, lx=None) -> FluxSample:
        return FluxSample(self.poynting(x, lx), self.net_emission(x, lx))

    def ladder_kernel(self, x, j: str, grid=None, lx=None) -> LadderKernel:
        """Ladder-operator weights sqrt(rho_NL,j,e / rho_j) and sqrt(rho_NL,j,m / rho_j).

        rho_j is taken from the imaginary part of the Green's function, so the
        normalization of the returned weights is an independent check of the
        quadrature.
        """
        lx = self._layer(x, lx)
        la = self.stack.layer(lx)
        g = self.greens.tensor(x, x, lx, lx)
        pre = 2 * self.omega / (math.pi * self.constants.c**2 * self.constants.S)
        rho = {"e": pre * g.g_ee.imag, "m": pre * g.g_mm.imag}
        rho["tot"] = abs(la.epsilon) / 2 * rho["e"] + abs(la.mu) / 2 * rho["m"]
        if not rho[j] > 0:
            raise DegenerateError(f"rho_{j} vanishes at x = {x!r}")
        we, wm = _kernel_split(j, abs(la.epsilon) / 2, abs(la.mu) / 2)
        p = nldos_prefactor(self.omega, self.constants)
        K = self.kernels(x, lx)
        layer_e = p * (K @ we) / rho[j]
        layer_m = p * (K @ wm) / rho[j]
        grid = np.asarray([] if grid is None else grid, float)
        w_e = np.zeros(len(grid))
        w_m = np.zeros(len(grid))
        if len(grid):
            ly = locate(self.stack, grid)
            for L in np.unique(ly):
                sel = ly == L
                gs = self.greens.tensor(x, grid[sel], lx, int(L))
                ei, mi = self.stack.layer(int(L)).epsilon.imag, self.stack.layer(int(L)).mu.imag
                comp = np.stack([ei * np.abs(gs.g_ee) ** 2, mi * np.abs(gs.g_em) ** 2,
                                 ei * np.abs(gs.g_me) ** 2, mi * np.abs(gs.g_mm) ** 2], axis=-1)
                w_e[sel] = np.sqrt(p * (comp @ we[:4]) / rho[j])
                w_m[sel] = np.sqrt(p * (comp @ wm[:4]) / rho[j])
        return LadderKernel(grid, w_e, w_m, layer_e, layer_m)


def _kernel_split(j, a, b):
    """Component weights picking the e-source and m-source parts of rho_NL,j."""
    we = np.zeros(6)
    wm = np.zeros(6)
    if j == "e":
        we[EE] = wm[EM] = 1.0
    elif j == "m":
        we[ME] = wm[MM] = 1.0
    elif j == "tot":
        we[EE], we[ME] = a, b
        wm[EM], wm[MM] = a, b
    else:
        raise ValueError(f"unknown field type {j!r}")
    return we, wm


# -- functional front end -----------------------------------------------------

def photon_number(stack: Stack, omega: float, x, j: str = "tot", **kw) -> float:
    if j not in FIELDS:
        raise ValueError(f"unknown field type {j!r}")
    return SpectralPoint(stack, omega, **kw).photon_numbers(x)[j]


def fluctuations(stack: Stack, omega: float, x, **kw) -> FluctuationSample:
    return SpectralPoint(stack, omega, **kw).fluctuations(x)


def poynting(stack: Stack, omega: float, x, **kw) -> float:
    return SpectralPoint(stack, omega, **kw).poynting(x)


def net_emission(stack: Stack, omega: float, x, **kw) -> float:
    return SpectralPoint(stack, omega, **kw).net_emission(x)


def ladder_kernel(stack: Stack, omega: float, x, j: str, grid=None, **kw) -> LadderKernel:
    return SpectralPoint(stack, omega, **kw).ladder_kernel(x, j, grid)


def steady_state_temperature(stack: Stack, probe: int, band: tuple[float, float], *,
                             loss_floor: float = DEFAULT_LOSS_FLOOR,
                             quad: QuadratureSpec = QuadratureSpec(rtol=1e-7, order=10),
                             constants: PhysicalConstants = CONSTANTS,
                             bracket: tuple[float, float] = (1.0, 1e4), x_order: int = 10) -> float:
    """Temperature of layer ``probe`` at which its band-integrated net emission vanishes.

    ``band`` gives the angular-frequency limits (rad/s). The probe must be
    an interior layer with loss in at least one channel; its current
    temperature is ignored.
    """
    if not 1 < probe < stack.N + 1:
        raise ValueError("probe must be an interior (finite) layer")
    la = stack.layer(probe)
    if not la.lossy:
        raise PreconditionError(f"probe layer {probe} is lossless and has no thermal coupling")
    w_lo, w_hi = band
    if not 0 < w_lo < w_hi:
        raise ValueError("band must satisfy 0 < omega_min < omega_max")
    x0, x1 = stack.interfaces[probe - 2], stack.interfaces[probe - 1]
    t, wt = gauss_legendre(x_order)
    xs = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * t
    wx = 0.5 * (x1 - x0) * wt
    hbar = constants.hbar
    ei, mi = la.epsilon.imag, la.mu.imag
    others = [la_.temperature for i, la_ in enumerate(stack.layers, 1) if i != probe]
    probe_temps = sorted({max(others), min(others), float(np.mean(others))})

    cache = {}

    def balance(omegas):
        out = np.empty((len(omegas), 2 + len(probe_temps)))
        for i, w in enumerate(omegas):
            if w in cache:
                out[i] = cache[w]
                continue
            sp = SpectralPoint(stack, w, loss_floor, quad, constants)
            B = C = 0.0
            for x, wxi in zip(xs, wx):
                D = sp._weights(x, probe)
                rho = D.sum(1)
                rest = D @ sp.eta - D[:, probe] * sp.eta[probe]
                B += wxi * (ei * (rho[0] - D[0, probe]) + mi * (rho[1] - D[1, probe]))
                C += wxi * (ei * rest[0] + mi * rest[1])
            out[i, :2] = hbar * w**2 * B, hbar * w**2 * C
            out[i, 2:] = out[i, 0] * bose_einstein(w, probe_temps, constants)
            cache[w] = out[i].copy()
        return out

    _, nodes, weights = integrate(balance, [w_lo, w_hi], quad, return_rule=True)
    table = balance(nodes)
    B, C = table[:, 0], table[:, 1]

    def residual(T):
        return float(weights @ (B * bose_einstein(nodes, T, constants) - C))

    lo, hi = bracket
    r_lo, r_hi = residual(lo), residual(hi)
    if r_lo == 0:
        return lo
    if np.sign(r_lo) == np.sign(r_hi):
        raise ValueError(f"net emission does not change sign on [{lo}, {hi}] K")
    return brentq(residual, lo, hi, xtol=1e-9, rtol=1e-12)
