"""Layered-structure data model, physical constants and small helpers.

Layers are numbered from 1 to N+1 from left to right and the N interfaces
from 1 to N, so that interface ``l`` separates layer ``l`` from layer ``l+1``.
All positions are in metres and all arithmetic is SI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from scipy import constants as _sc


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = _sc.c
    hbar: float = _sc.hbar
    eps0: float = 1.0 / (_sc.mu_0 * _sc.c**2)  # tabulated value is rounded
    mu0: float = _sc.mu_0
    kB: float = _sc.k
    e: float = _sc.e
    S: float = 1.0  # quantization area (m^2)

    def __post_init__(self):
        for name in ("c", "hbar", "eps0", "mu0", "kB", "e", "S"):
            if not getattr(self, name) > 0:
                raise ValueError(f"constant {name} must be positive")
        if abs(self.c**2 * self.eps0 * self.mu0 - 1.0) > 1e-12:
            raise ValueError("c^2 eps0 mu0 must equal 1")

    def omega_from_ev(self, energy_ev):
        return energy_ev * self.e / self.hbar

    def ev_from_omega(self, omega):
        return omega * self.hbar / self.e

    @property
    def ldos_unit(self) -> float:
        """Plotting unit 2/(pi c S) of the densities of states, in s/m^2."""
        return 2.0 / (math.pi * self.c * self.S)


CONSTANTS = PhysicalConstants()


def refractive_index(epsilon: complex, mu: complex) -> complex:
    """Refractive index sqrt(eps*mu) on the branch Im(n) >= 0.

    When the root is real the positive one is returned.
    """
    epsilon, mu = complex(epsilon), complex(mu)
    if epsilon == 0 or mu == 0:
        raise ValueError("degenerate medium: epsilon and mu must be nonzero")
    n = np.sqrt(epsilon * mu)
    if n.imag < 0 or (n.imag == 0 and n.real < 0):
        n = -n
    return complex(n)


@dataclass(frozen=True)
class Layer:
    """Homogeneous layer. ``thickness`` is None for the semi-infinite leads."""

    epsilon: complex = 1.0
    mu: complex = 1.0
    thickness: float | None = None
    temperature: float = 0.0
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "epsilon", complex(self.epsilon))
        object.__setattr__(self, "mu", complex(self.mu))
        label = self.name or "layer"
        if self.epsilon.imag < 0 or self.mu.imag < 0:
            raise ValueError(f"{label}: Im(epsilon) and Im(mu) must be >= 0 (passive media)")
        if self.epsilon == 0 or self.mu == 0:
            raise ValueError(f"{label}: epsilon and mu must be nonzero")
        if self.temperature < 0:
            raise ValueError(f"{label}: temperature must be >= 0")
        if self.thickness is not None and not self.thickness > 0:
            raise ValueError(f"{label}: thickness must be positive, got {self.thickness}")

    @property
    def n(self) -> complex:
        return refractive_index(self.epsilon, self.mu)

    @property
    def lossy(self) -> bool:
        return self.epsilon.imag > 0 or self.mu.imag > 0

    def swapped(self) -> Layer:
        """Dual layer with epsilon and mu exchanged."""
        return replace(self, epsilon=self.mu, mu=self.epsilon)


@dataclass(frozen=True)
class Stack:
    """Ordered layers; the first interface sits at ``origin``.

    Interior layers need a finite thickness, the two outer ones are
    semi-infinite. A single layer is a homogeneous space.
    """

    layers: tuple[Layer, ...]
    origin: float = 0.0

    def __post_init__(self):
        layers = tuple(self.layers)
        object.__setattr__(self, "layers", layers)
        if not layers:
            raise ValueError("stack needs at least one layer")
        for i, layer in enumerate(layers, start=1):
            outer = i == 1 or i == len(layers)
            label = layer.name or f"layer {i}"
            if outer and layer.thickness is not None:
                raise ValueError(f"{label}: outer layers are semi-infinite (thickness must be None)")
            if not outer and layer.thickness is None:
                raise ValueError(f"{label}: interior layers need a finite positive thickness")

    @property
    def N(self) -> int:
        """Number of interfaces."""
        return len(self.layers) - 1

    @cached_property
    def interfaces(self) -> np.ndarray:
        d = [layer.thickness for layer in self.layers[1:-1]]
        return self.origin + np.concatenate(([0.0], np.cumsum(d))) if self.N else np.empty(0)

    @cached_property
    def bounds(self) -> np.ndarray:
        """Padded interface array: bounds[0] = -inf, bounds[1..N], bounds[N+1] = +inf."""
        return np.concatenate(([-np.inf], self.interfaces, [np.inf]))

    def layer(self, l: int) -> Layer:
        return self.layers[l - 1]

    def epsilon_at(self, x) -> complex:
        return self.layer(locate(self, x)).epsilon

    def mu_at(self, x) -> complex:
        return self.layer(locate(self, x)).mu

    def swapped(self) -> Stack:
        return Stack(tuple(layer.swapped() for layer in self.layers), self.origin)

    def with_temperatures(self, temps) -> Stack:
        return Stack(tuple(replace(la, temperature=float(t)) for la, t in zip(self.layers, temps)), self.origin)

    def with_layer(self, l: int, **changes) -> Stack:
        layers = list(self.layers)
        layers[l - 1] = replace(layers[l - 1], **changes)
        return Stack(tuple(layers), self.origin)

    def with_loss_floor(self, delta: float) -> Stack:
        """Give nominally lossless leads a small imaginary part ``delta``.

        Only the two semi-infinite layers are touched, and only in the
        channel (epsilon or mu) whose imaginary part is exactly zero.
        """
        if delta <= 0:
            return self
        layers = list(self.layers)
        for i in {0, len(layers) - 1}:
            la = layers[i]
            eps = la.epsilon if la.epsilon.imag > 0 else complex(la.epsilon.real, delta)
            mu = la.mu if la.mu.imag > 0 else complex(la.mu.real, delta)
            layers[i] = replace(la, epsilon=eps, mu=mu)
        return Stack(tuple(layers), self.origin)

    @classmethod
    def homogeneous(cls, epsilon=1.0, mu=1.0, temperature=0.0) -> Stack:
        return cls((Layer(epsilon, mu, None, temperature),))


def locate(stack: Stack, x) -> int | np.ndarray:
    """1-based index of the layer holding ``x``.

    Layer l owns (x_{l-1}, x_l]; a point on an interface belongs to the
    layer on its left.
    """
    idx = np.searchsorted(stack.interfaces, x, side="left") + 1
    return int(idx) if np.ndim(idx) == 0 else idx


@dataclass(frozen=True)
class FrequencySample:
    omega: float
    k0: float
    n: np.ndarray  # 1-based: n[0] unused
    k: np.ndarray
    v: np.ndarray = field(repr=False)


def frequency_sample(stack: Stack, omega: float, constants: PhysicalConstants = CONSTANTS) -> FrequencySample:
    if not omega > 0:
        raise ValueError("omega must be positive")
    k0 = omega / constants.c
    n = np.array([np.nan] + [la.n for la in stack.layers], dtype=complex)
    with np.errstate(divide="ignore"):
        v = constants.c / n.real
    return FrequencySample(omega=omega, k0=k0, n=n, k=k0 * n, v=v)


def bose_einstein(omega, T, constants: PhysicalConstants = CONSTANTS):
    """Thermal occupation 1/(exp(hbar w / kB T) - 1); zero at T = 0."""
    omega = np.asarray(omega, dtype=float)
    T = np.asarray(T, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        x = constants.hbar * omega / (constants.kB * T)
        out = np.where(T > 0, 1.0 / np.expm1(x), 0.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class NoiseNormalization:
    """Noise-current amplitudes up to an undetermined phase."""

    j0e: float
    j0m: float


def noise_normalization(layer: Layer, omega: float, constants: PhysicalConstants = CONSTANTS) -> NoiseNormalization:
    pre = 4 * math.pi * constants.hbar * omega**2 / constants.S
    return NoiseNormalization(
        j0e=math.sqrt(pre * constants.eps0 * layer.epsilon.imag),
        j0m=math.sqrt(pre * constants.mu0 * layer.mu.imag),
    )
