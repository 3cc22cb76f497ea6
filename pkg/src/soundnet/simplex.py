"""Derivative-free simplex minimizer (Nelder-Mead).

Coefficients: reflection 1, expansion 2, contraction 0.5, shrink 0.5.
Terminates when the simplex diameter drops below `diameter_tol` or after
`max_iter` iterations. Objectives signal invalid regions by returning +inf.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SimplexResult:
    x: np.ndarray
    fx: float
    iterations: int
    converged: bool


def _initial_simplex(x0: np.ndarray) -> np.ndarray:
    dim = x0.size
    simplex = np.tile(x0, (dim + 1, 1))
    for i in range(dim):
        step = 0.05 * abs(x0[i]) if abs(x0[i]) > 1e-8 else 0.00025
        simplex[i + 1, i] += step
    return simplex


def nelder_mead(fn, x0, max_iter: int = 10_000, diameter_tol: float = 1e-9) -> SimplexResult:
    x0 = np.asarray(x0, dtype=np.float64)
    simplex = _initial_simplex(x0)
    values = np.array([fn(v) for v in simplex], dtype=np.float64)
    values = np.where(np.isnan(values), np.inf, values)

    iterations = 0
    converged = False
    while iterations < max_iter:
        order = np.argsort(values, kind="stable")
        simplex, values = simplex[order], values[order]

        diameter = np.max(np.abs(simplex[1:] - simplex[0])) if simplex.shape[0] > 1 else 0.0
        if diameter < diameter_tol:
            converged = True
            break
        iterations += 1

        best, worst, second_worst = values[0], values[-1], values[-2]
        centroid = simplex[:-1].mean(axis=0)

        reflected = centroid + (centroid - simplex[-1])
        f_ref = _safe(fn, reflected)
        if f_ref < best:
            expanded = centroid + 2.0 * (reflected - centroid)
            f_exp = _safe(fn, expanded)
            if f_exp < f_ref:
                simplex[-1], values[-1] = expanded, f_exp
            else:
                simplex[-1], values[-1] = reflected, f_ref
            continue
        if f_ref < second_worst:
            simplex[-1], values[-1] = reflected, f_ref
            continue

        if f_ref < worst:  # outside contraction
            contracted = centroid + 0.5 * (reflected - centroid)
            f_con = _safe(fn, contracted)
            if f_con <= f_ref:
                simplex[-1], values[-1] = contracted, f_con
                continue
        else:  # inside contraction
            contracted = centroid + 0.5 * (simplex[-1] - centroid)
            f_con = _safe(fn, contracted)
            if f_con < worst:
                simplex[-1], values[-1] = contracted, f_con
                continue

        # shrink toward the best vertex
        simplex[1:] = simplex[0] + 0.5 * (simplex[1:] - simplex[0])
        values[1:] = [_safe(fn, v) for v in simplex[1:]]

    order = np.argsort(values, kind="stable")
    simplex, values = simplex[order], values[order]
    return SimplexResult(x=simplex[0].copy(), fx=float(values[0]), iterations=iterations, converged=converged)


def _safe(fn, x) -> float:
    v = float(fn(x))
    return np.inf if np.isnan(v) else v
