"""Derivative-free minimisation (Nelder-Mead simplex)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["OptimizeResult", "nelder_mead"]


@dataclass
class OptimizeResult:
    x: np.ndarray
    fun: float
    converged: bool
    iterations: int
    nfev: int


def nelder_mead(
    objective,
    x0,
    step=0.25,
    max_iter=2000,
    xatol=1e-8,
    fatol=1e-10,
    spread_xatol=1e-4,
    alpha=1.0,
    gamma=2.0,
    beta=0.5,
    sigma=0.5,
):
    """Minimise ``objective`` from ``x0`` with the Nelder-Mead simplex method.

    ``objective`` may return ``inf`` (or nan, treated as ``inf``) to mark
    infeasible points; ``x0`` itself must be feasible.  Iteration stops when
    the simplex diameter (max distance to the best vertex) drops below
    ``xatol``, when the spread of objective values drops below ``fatol`` on
    a simplex no wider than ``spread_xatol``, or after ``max_iter``
    iterations, in which case ``converged`` is False.  The width guard stops
    a wide simplex straddling the minimum symmetrically from passing the
    spread test.
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    dim = x0.size
    nfev = 0

    def f(x):
        nonlocal nfev
        nfev += 1
        val = float(objective(x))
        return math.inf if math.isnan(val) else val

    f0 = f(x0)
    if not math.isfinite(f0):
        raise ValueError("objective must be finite at the starting point")

    steps = np.broadcast_to(np.asarray(step, dtype=float), (dim,))
    simplex = np.empty((dim + 1, dim))
    values = np.empty(dim + 1)
    simplex[0], values[0] = x0, f0
    for i in range(dim):
        x = x0.copy()
        x[i] += steps[i]
        simplex[i + 1], values[i + 1] = x, f(x)

    iterations = 0
    converged = False
    while True:
        order = np.argsort(values, kind="stable")
        simplex, values = simplex[order], values[order]
        diameter = math.sqrt(float(((simplex[1:] - simplex[0]) ** 2).sum(axis=1).max()))
        spread = values[-1] - values[0]
        if diameter < xatol or (spread < fatol and diameter < spread_xatol):
            converged = True
            break
        if iterations >= max_iter:
            break
        iterations += 1

        centroid = simplex[:-1].sum(axis=0) / dim
        worst = simplex[-1]
        xr = centroid + alpha * (centroid - worst)
        fr = f(xr)
        if values[0] <= fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
            continue
        if fr < values[0]:
            xe = centroid + gamma * (xr - centroid)
            fe = f(xe)
            if fe < fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
            continue
        if fr < values[-1]:
            xc = centroid + beta * (xr - centroid)
            fc = f(xc)
            if fc <= fr:
                simplex[-1], values[-1] = xc, fc
                continue
        else:
            xc = centroid + beta * (worst - centroid)
            fc = f(xc)
            if fc < values[-1]:
                simplex[-1], values[-1] = xc, fc
                continue
        # shrink towards the best vertex
        for i in range(1, dim + 1):
            simplex[i] = simplex[0] + sigma * (simplex[i] - simplex[0])
            values[i] = f(simplex[i])

    return OptimizeResult(simplex[0].copy(), float(values[0]), converged, iterations, nfev)
