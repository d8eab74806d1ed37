"""Adaptive Gauss-Legendre quadrature for vector-valued integrands.

Each interval is integrated with an n-point rule on the whole interval and
on its two halves; the difference is the error estimate. Intervals whose
error exceeds ``rtol`` times their own L1 mass (plus a share of ``atol``)
are bisected. All pending intervals are evaluated in one integrand call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class QuadratureError(RuntimeError):
    """Adaptive refinement exceeded its interval budget."""


@dataclass(frozen=True)
class QuadratureSpec:
    rtol: float = 1e-8
    atol: float = 1e-30
    order: int = 20
    max_intervals: int = 20000


_RULES: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order not in _RULES:
        _RULES[order] = np.polynomial.legendre.leggauss(order)
    return _RULES[order]


def _rule(a, b, order):
    """Nodes (m, order) and weights (m, order) for intervals [a, b]."""
    t, w = gauss_legendre(order)
    half = 0.5 * (b - a)[:, None]
    mid = 0.5 * (b + a)[:, None]
    return mid + half * t, half * w


def integrate(f, breakpoints, spec: QuadratureSpec = QuadratureSpec(), return_rule: bool = False):
    """Integrate ``f`` over [breakpoints[0], breakpoints[-1]].

    ``f`` maps a 1-D array of nodes to an array of shape (len(nodes), m)
    (or (len(nodes),) for scalar integrands). Breakpoints mark kinks or
    discontinuities; they are sorted and deduplicated. With
    ``return_rule`` the final nodes and weights are returned as well, so
    related integrands can reuse the converged partition.
    """
    pts = np.unique(np.asarray(breakpoints, float))
    if len(pts) < 2:
        raise ValueError("need at least two distinct breakpoints")
    if not np.all(np.isfinite(pts)):
        raise ValueError("breakpoints must be finite")
    total_len = pts[-1] - pts[0]
    a, b = pts[:-1], pts[1:]
    order = spec.order

    def evaluate(a, b):
        x, w = _rule(a, b, order)
        fx = np.asarray(f(x.ravel()))
        scalar = fx.ndim == 1
        fx = fx.reshape(x.shape + (() if scalar else fx.shape[1:]))
        wx = w.reshape(w.shape + (1,) * (fx.ndim - 2))
        return (fx * wx).sum(1), (np.abs(fx) * wx).sum(1), x, w, scalar

    coarse, _, _, _, scalar = evaluate(a, b)
    result = 0.0
    nodes, weights = [], []
    n_done = 0
    while len(a):
        m = 0.5 * (a + b)
        fine, l1, x, w, _ = evaluate(np.concatenate((a, m)), np.concatenate((m, b)))
        k = len(a)
        fine_sum = fine[:k] + fine[k:]
        l1_sum = l1[:k] + l1[k:]
        err = np.abs(coarse - fine_sum)
        tol = spec.rtol * l1_sum + spec.atol * ((b - a) / total_len).reshape((-1,) + (1,) * (err.ndim - 1))
        ok = np.all(err <= tol, axis=tuple(range(1, err.ndim)))
        result = result + fine_sum[ok].sum(0)
        if return_rule:
            sel = np.concatenate((ok, ok))
            nodes.append(x[sel].ravel())
            weights.append(w[sel].ravel())
        n_done += int(ok.sum())
        bad = ~ok
        if n_done + 2 * bad.sum() > spec.max_intervals:
            raise QuadratureError(f"adaptive quadrature did not converge within {spec.max_intervals} intervals")
        a, b = np.concatenate((a[bad], m[bad])), np.concatenate((m[bad], b[bad]))
        coarse = np.concatenate((fine[:k][bad], fine[k:][bad]))
    result = np.asarray(result)
    if return_rule:
        return result, np.concatenate(nodes), np.concatenate(weights)
    return result
