"""Single-interface Fresnel coefficients and the multilayer coefficient ladder.

Family ``"e"`` carries the electric-field boundary conditions (E and
E'/mu continuous), family ``"m"`` the dual magnetic ones. Swapping epsilon
and mu in every layer swaps the two families.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import FrequencySample, Layer, Stack, refractive_index

FAMILIES = ("e", "m")

POLE_THRESHOLD = 1e-14


class ResonanceError(ArithmeticError):
    """Evaluation sits exactly on a pole of a lossless resonator."""


@dataclass(frozen=True)
class SingleInterfaceCoeffs:
    r_e: complex
    t_e: complex
    r_m: complex
    t_m: complex
    rp_e: complex
    tp_e: complex
    rp_m: complex
    tp_m: complex

    def r(self, family: str, right: bool = False) -> complex:
        return getattr(self, f"{'rp' if right else 'r'}_{family}")

    def t(self, family: str, right: bool = False) -> complex:
        return getattr(self, f"{'tp' if right else 't'}_{family}")


def _fresnel_pair(z1: complex, z2: complex) -> tuple[complex, complex]:
    # z = n / mu for family e, n / eps for family m
    den = z1 + z2
    if den == 0:
        raise ZeroDivisionError("degenerate interface: Fresnel denominator vanishes")
    return (z1 - z2) / den, 2 * z1 / den


def fresnel(left: Layer, right: Layer, freq: FrequencySample | None = None) -> SingleInterfaceCoeffs:
    """Normal-incidence reflection/transmission for both families and directions.

    ``freq`` is accepted for interface symmetry with the ladder; the
    coefficients do not depend on frequency beyond the layer parameters.
    """
    n1 = refractive_index(left.epsilon, left.mu)
    n2 = refractive_index(right.epsilon, right.mu)
    # r_e = (mu2 n1 - mu1 n2) / (mu2 n1 + mu1 n2), i.e. impedance form n/mu
    r_e, t_e = _fresnel_pair(n1 / left.mu, n2 / right.mu)
    r_m, t_m = _fresnel_pair(n1 / left.epsilon, n2 / right.epsilon)
    rp_e, tp_e = _fresnel_pair(n2 / right.mu, n1 / left.mu)
    rp_m, tp_m = _fresnel_pair(n2 / right.epsilon, n1 / left.epsilon)
    return SingleInterfaceCoeffs(r_e, t_e, r_m, t_m, rp_e, tp_e, rp_m, tp_m)


@dataclass(frozen=True)
class FamilyLadder:
    """Recursive coefficients of one family, indexed like the layers.

    ``R[l]`` and ``Rp[l]`` refer to interface l (R[N+1] = Rp[0] = 0).
    ``T[l]``/``Tp[l]`` are the multi-interface transmissions through
    interface l, ``nu[l]`` the multiple-reflection factor of layer l.
    """

    family: str
    r: np.ndarray
    t: np.ndarray
    rp: np.ndarray
    tp: np.ndarray
    R: np.ndarray
    Rp: np.ndarray
    T: np.ndarray
    Tp: np.ndarray
    nu: np.ndarray


@dataclass(frozen=True)
class CoefficientLadder:
    N: int
    k: np.ndarray  # 1-based layer wavenumbers
    d: np.ndarray  # 1-based thicknesses, 0 for the leads
    phase: np.ndarray  # exp(i k_l d_l), 1 for the leads
    e: FamilyLadder
    m: FamilyLadder

    def family(self, j: str) -> FamilyLadder:
        return self.e if j == "e" else self.m


def _check_pole(den, what):
    if np.any(np.abs(den) < POLE_THRESHOLD):
        raise ResonanceError(f"{what}: evaluation on a lossless resonance pole")


def _build_family(stack: Stack, j: str, phase2: np.ndarray) -> FamilyLadder:
    N = stack.N
    size = N + 2
    r = np.zeros(size, complex)
    t = np.zeros(size, complex)
    rp = np.zeros(size, complex)
    tp = np.zeros(size, complex)
    for l in range(1, N + 1):
        c = fresnel(stack.layer(l), stack.layer(l + 1))
        r[l], t[l] = c.r(j), c.t(j)
        rp[l], tp[l] = c.r(j, True), c.t(j, True)

    R = np.zeros(size, complex)
    for l in range(N, 0, -1):
        x = R[l + 1] * phase2[l + 1]
        den = 1 + r[l] * x
        _check_pole(den, f"R_{l}")
        R[l] = (r[l] + x) / den

    Rp = np.zeros(size, complex)
    for l in range(1, N + 1):
        x = Rp[l - 1] * phase2[l]
        den = 1 + rp[l] * x
        _check_pole(den, f"R'_{l}")
        Rp[l] = (rp[l] + x) / den

    nu = np.ones(size, complex)
    for l in range(1, N + 2):
        den = 1 - Rp[l - 1] * R[l] * phase2[l]
        _check_pole(den, f"nu_{l}")
        nu[l] = 1 / den

    T = np.zeros(size, complex)
    Tp = np.zeros(size, complex)
    for l in range(1, N + 1):
        T[l] = t[l] * nu[l + 1] / (nu[l] * (1 - Rp[l - 1] * r[l] * phase2[l]))
        Tp[l] = tp[l] * nu[l] / (nu[l + 1] * (1 - R[l + 1] * rp[l] * phase2[l + 1]))
    return FamilyLadder(j, r, t, rp, tp, R, Rp, T, Tp, nu)


def build_ladder(stack: Stack, freq: FrequencySample) -> CoefficientLadder:
    """All recursive reflection/transmission coefficients at one frequency."""
    N = stack.N
    d = np.zeros(N + 2)
    for l in range(2, N + 1):
        d[l] = stack.layer(l).thickness
    phase = np.exp(1j * freq.k * d)
    phase[0] = phase[N + 1] = phase[1] = 1.0
    phase2 = phase**2
    return CoefficientLadder(
        N=N,
        k=freq.k,
        d=d,
        phase=phase,
        e=_build_family(stack, "e", phase2),
        m=_build_family(stack, "m", phase2),
    )


def cumulative_transmission(ladder: CoefficientLadder, l: int, lp: int, j: str) -> complex:
    """Transmission amplitude from source layer ``lp`` into field layer ``l``.

    For l > lp the result is referenced to the left edge of layer l (right-going
    wave); for l < lp to the right edge of layer l (left-going wave).
    """
    n_layers = ladder.N + 1
    if not (1 <= l <= n_layers and 1 <= lp <= n_layers) or l == lp:
        raise IndexError(f"invalid layer pair ({l}, {lp})")
    f = ladder.family(j)
    if l > lp:
        out = f.T[lp]
        for m in range(lp + 1, l):
            out = out * f.T[m] * ladder.phase[m]
        return complex(out)
    out = f.Tp[lp - 1]
    for m in range(lp - 2, l - 1, -1):
        out = out * f.Tp[m] * ladder.phase[m + 1]
    return complex(out)
