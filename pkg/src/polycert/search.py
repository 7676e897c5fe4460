"""Deterministic numerical search primitives shared by the verdict modules.

Everything here is seed-free: starting points come from Halton sequences and
all iterations are damped Newton / Levenberg-Marquardt with exact polynomial
derivatives, so repeated runs produce identical results.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from polycert.polynomial import Polynomial

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)


def halton(index: int, dim: int) -> np.ndarray:
    """Point ``index`` (1-based) of the Halton sequence in [0, 1)^dim."""
    out = np.empty(dim)
    for d in range(dim):
        base = _PRIMES[d % len(_PRIMES)]
        f, value, i = 1.0, 0.0, index
        while i > 0:
            f /= base
            value += f * (i % base)
            i //= base
        out[d] = value
    return out


def halton_grid(count: int, dim: int) -> np.ndarray:
    return np.vstack([halton(i + 1, dim) for i in range(count)])


def eval_many(polys: Sequence[Polynomial], x: np.ndarray) -> np.ndarray:
    return np.array([p.evaluate(x) for p in polys])


def levenberg_marquardt(
    residual: Callable[[np.ndarray], np.ndarray],
    jacobian: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    max_iter: int = 200,
    tol: float = 1e-14,
) -> tuple[np.ndarray, float]:
    """Minimize ||residual||^2; returns (point, final squared norm)."""
    x = np.asarray(x0, dtype=float).copy()
    lam = 1e-3
    r = residual(x)
    fx = float(r @ r)
    for _ in range(max_iter):
        if fx <= tol:
            break
        j = jacobian(x)
        g = j.T @ r
        if float(np.linalg.norm(g)) <= 1e-16:
            break
        h = j.T @ j
        stepped = False
        for _ in range(40):
            try:
                delta = np.linalg.solve(h + lam * np.eye(len(x)), -g)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            x_new = x + delta
            r_new = residual(x_new)
            f_new = float(r_new @ r_new)
            if f_new < fx:
                x, r, fx = x_new, r_new, f_new
                lam = max(lam * 0.3, 1e-12)
                stepped = True
                break
            lam *= 10.0
            if lam > 1e12:
                break
        if not stepped:
            break
    return x, fx


def damped_newton_gradient(
    f: Polynomial,
    x0: np.ndarray,
    max_iter: int = 80,
    tol: float = 1e-12,
) -> tuple[np.ndarray, float]:
    """Drive the gradient of f to zero from x0; returns (point, |grad|)."""
    grad = f.gradient()
    hess = f.hessian()
    n = f.num_vars
    x = np.asarray(x0, dtype=float).copy()
    for _ in range(max_iter):
        g = eval_many(grad, x)
        gn = float(np.linalg.norm(g))
        if gn <= tol:
            break
        h = np.array([[hess[i][j].evaluate(x) for j in range(n)] for i in range(n)])
        try:
            step = np.linalg.solve(h, -g)
        except np.linalg.LinAlgError:
            step = -g
        # damping: accept the longest halving that reduces |grad|
        scale = 1.0
        for _ in range(30):
            x_new = x + scale * step
            if float(np.linalg.norm(eval_many(grad, x_new))) < gn:
                x = x_new
                break
            scale *= 0.5
        else:
            break
    return x, float(np.linalg.norm(eval_many(grad, x)))
