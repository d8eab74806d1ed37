"""Green's functions of a layered structure at normal incidence.

For a field layer l and a source layer l' the scaled Green's function is a
short sum of plane-wave products

    xi(x, x') = sum_t c_t exp(i a_t (x - ox_t)) exp(i b_t (x' - oy_t))

plus, in the source layer, the direct term i exp(i k |x - x'|) / (2k).
Keeping this form lets every derivative be taken exactly term by term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coefficients import CoefficientLadder, build_ladder
from .model import CONSTANTS, FrequencySample, PhysicalConstants, Stack, frequency_sample, locate


@dataclass(frozen=True)
class ScaledGreens:
    value: complex | np.ndarray
    d_dx: complex | np.ndarray
    d_dxprime: complex | np.ndarray
    family: str


@dataclass(frozen=True)
class GreensSample:
    g_ee: complex | np.ndarray
    g_em: complex | np.ndarray
    g_me: complex | np.ndarray
    g_mm: complex | np.ndarray
    coincident: bool | np.ndarray = False


@dataclass(frozen=True)
class _Terms:
    c: np.ndarray
    a: np.ndarray
    ox: np.ndarray
    b: np.ndarray
    oy: np.ndarray
    k_direct: complex | None  # source-layer homogeneous term


class LayeredGreens:
    """Green's functions of ``stack`` at angular frequency ``omega``.

    The coefficient ladder is built once; evaluations are vectorised over
    the source coordinate (and broadcast over the field coordinate) for
    points lying in a given pair of layers.
    """

    def __init__(self, stack: Stack, omega: float, constants: PhysicalConstants = CONSTANTS,
                 ladder: CoefficientLadder | None = None):
        self.stack = stack
        self.constants = constants
        self.freq: FrequencySample = frequency_sample(stack, omega, constants)
        self.ladder = ladder if ladder is not None else build_ladder(stack, self.freq)
        self.omega = omega
        self.k0 = self.freq.k0
        self.eps = np.array([np.nan] + [la.epsilon for la in stack.layers], complex)
        self.mu = np.array([np.nan] + [la.mu for la in stack.layers], complex)
        self._cache: dict[tuple[int, int, str], _Terms] = {}

    def terms(self, l: int, lp: int, j: str) -> _Terms:
        key = (l, lp, j)
        if key not in self._cache:
            self._cache[key] = self._build_terms(l, lp, j)
        return self._cache[key]

    def _build_terms(self, l: int, lp: int, j: str) -> _Terms:
        L = self.ladder
        f = L.family(j)
        N = L.N
        xs = self.stack.bounds
        kp = L.k[lp]
        pre = 1j / (2 * kp)
        E2p = L.phase[lp] ** 2
        rows = []  # (c, a, ox, b, oy)
        if l == lp:
            nu, R, Rp = f.nu[lp], f.R[lp], f.Rp[lp - 1]
            xL, xR = xs[lp - 1], xs[lp]
            if lp <= N:
                # nu R exp(-ik(x + x' - 2 xR))
                rows.append((pre * nu * R, -kp, xR, -kp, xR))
            if lp >= 2:
                rows.append((pre * nu * Rp, kp, xL, kp, xL))
            if 2 <= lp <= N:
                # nu R R' exp(-ik(x - x' - 2d)) and nu R' R exp(ik(x - x' + 2d))
                rows.append((pre * nu * R * Rp * E2p, -kp, xL, kp, xL))
                rows.append((pre * nu * R * Rp * E2p, kp, xL, -kp, xL))
            direct = kp
        else:
            k = L.k[l]
            if l > lp:
                amp = pre * _chain(L, f, l, lp, right=True)
                # outgoing amplitude at the right edge of the source layer
                src = [(1.0, -kp, xs[lp])]
                if lp >= 2:
                    nu, R, Rp = f.nu[lp], f.R[lp], f.Rp[lp - 1]
                    src.append((nu * Rp * L.phase[lp], kp, xs[lp - 1]))
                    src.append((nu * Rp * R * E2p, -kp, xs[lp]))
                fld = [(1.0, k, xs[l - 1])]
                if l <= N:
                    fld.append((f.R[l] * L.phase[l] ** 2, -k, xs[l - 1]))
            else:
                amp = pre * _chain(L, f, l, lp, right=False)
                src = [(1.0, kp, xs[lp - 1])]
                if lp <= N:
                    nu, R, Rp = f.nu[lp], f.R[lp], f.Rp[lp - 1]
                    src.append((nu * R * E2p, -kp, xs[lp - 1]))
                    src.append((nu * R * Rp * E2p, kp, xs[lp - 1]))
                fld = [(1.0, -k, xs[l])]
                if l >= 2:
                    fld.append((f.Rp[l - 1] * L.phase[l], k, xs[l - 1]))
            for cs, b, oy in src:
                for cf, a, ox in fld:
                    rows.append((amp * cs * cf, a, ox, b, oy))
            direct = None
        if rows:
            c, a, ox, b, oy = (np.array(col) for col in zip(*rows))
        else:
            c = a = b = np.zeros(0, complex)
            ox = oy = np.zeros(0)
        return _Terms(c.astype(complex), a.astype(complex), ox.astype(float), b.astype(complex),
                      oy.astype(float), direct)

    def _layers(self, x, l):
        if l is None:
            l = locate(self.stack, x)
            if np.ndim(l):
                ls = np.unique(l)
                if len(ls) != 1:
                    raise ValueError("vectorised points must lie in a single layer; pass scalars")
                l = int(ls[0])
        return int(l)

    def xi_parts(self, x, xp, j: str, lx: int | None = None, lxp: int | None = None):
        """Value and exact derivatives of the scaled Green's function.

        Returns ``(value, d/dx, d/dx', d2/dxdx')``. At x = x' the first
        derivatives carry the symmetric average of the one-sided limits.
        """
        lx = self._layers(x, lx)
        lxp = self._layers(xp, lxp)
        tm = self.terms(lx, lxp, j)
        x = np.asarray(x, float)[..., None]
        y = np.asarray(xp, float)[..., None]
        ea = np.exp(1j * tm.a * (x - tm.ox))
        eb = np.exp(1j * tm.b * (y - tm.oy))
        E = tm.c * ea * eb
        val = E.sum(-1)
        dx = (1j * tm.a * E).sum(-1)
        dy = (1j * tm.b * E).sum(-1)
        dxy = (-(tm.a * tm.b) * E).sum(-1)
        if tm.k_direct is not None:
            k = tm.k_direct
            s = np.sign(x - y)[..., 0]
            ed = 1j / (2 * k) * np.exp(1j * k * np.abs(x - y))[..., 0]
            val = val + ed
            dx = dx + 1j * k * s * ed
            dy = dy - 1j * k * s * ed
            dxy = dxy + k * k * ed
        return val, dx, dy, dxy

    def xi(self, x, xp, j: str, lx=None, lxp=None) -> ScaledGreens:
        val, dx, dy, _ = self.xi_parts(x, xp, j, lx, lxp)
        return ScaledGreens(_scalar(val), _scalar(dx), _scalar(dy), j)

    def tensor(self, x, xp, lx=None, lxp=None) -> GreensSample:
        """G_ee, G_em, G_me and G_mm at (x, x')."""
        lx = self._layers(x, lx)
        lxp = self._layers(xp, lxp)
        ve, dxe, dye, _ = self.xi_parts(x, xp, "e", lx, lxp)
        vm, _, _, _ = self.xi_parts(x, xp, "m", lx, lxp)
        mu_x, mu_y, eps_y = self.mu[lx], self.mu[lxp], self.eps[lxp]
        k0 = self.k0
        coincident = np.asarray(x) == np.asarray(xp)
        return GreensSample(
            g_ee=_scalar(mu_y * ve),
            g_em=_scalar(-dye / k0),
            g_me=_scalar(mu_y * dxe / (k0 * mu_x)),
            g_mm=_scalar(eps_y * vm),
            coincident=_scalar(coincident),
        )

    def g_mm_from_ee(self, x, xp, lx=None, lxp=None):
        """G_mm from the mixed second derivative of G_ee (valid for x != x')."""
        lx = self._layers(x, lx)
        lxp = self._layers(xp, lxp)
        _, _, _, dxy = self.xi_parts(x, xp, "e", lx, lxp)
        return _scalar(dxy / (self.k0**2 * self.mu[lx]))


def _chain(L: CoefficientLadder, f, l: int, lp: int, right: bool) -> complex:
    if right:
        out = f.T[lp]
        for m in range(lp + 1, l):
            out = out * f.T[m] * L.phase[m]
        return out
    out = f.Tp[lp - 1]
    for m in range(lp - 2, l - 1, -1):
        out = out * f.Tp[m] * L.phase[m + 1]
    return out


def _scalar(v):
    v = np.asarray(v)
    return v.item() if v.ndim == 0 else v


def xi(stack: Stack, ladder: CoefficientLadder, freq: FrequencySample, x, xp, family: str,
       constants: PhysicalConstants = CONSTANTS) -> ScaledGreens:
    return LayeredGreens(stack, freq.omega, constants, ladder=ladder).xi(x, xp, family)


def greens_tensor(stack: Stack, freq: FrequencySample | float, x, xp,
                  constants: PhysicalConstants = CONSTANTS) -> GreensSample:
    omega = freq.omega if isinstance(freq, FrequencySample) else freq
    return LayeredGreens(stack, omega, constants).tensor(x, xp)
