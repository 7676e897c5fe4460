"""Critical-point location, Morse classification, and zero sets on constraint
regions.

For one variable the critical points are found exactly (companion-matrix
eigenvalues of the derivative, Newton-refined), so the Morse verdict is
global.  In higher dimensions the search is multi-start Newton from a
low-discrepancy grid and the verdict is explicitly restricted to the searched
region.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from polycert.polynomial import Polynomial, PolynomialError, PolynomialSystem
from polycert.search import damped_newton_gradient, halton_grid, levenberg_marquardt

Box = Sequence[tuple[float, float]]


class MorseError(ValueError):
    """Raised for inputs the critical-point search cannot handle."""


@dataclass(frozen=True)
class MorseConfig:
    gradient_tolerance: float = 1e-8
    hessian_tolerance: float = 1e-6  # relative to the Hessian norm
    zero_tolerance: float = 1e-8
    interior_tolerance: float = 1e-7
    dedup_radius: float = 1e-5
    grid_starts: int = 160
    newton_max_iter: int = 80


class PointKind(Enum):
    NONDEGENERATE_MIN = "NondegenerateMin"
    NONDEGENERATE_SADDLE = "NondegenerateSaddle"
    NONDEGENERATE_MAX = "NondegenerateMax"
    DEGENERATE = "Degenerate"


class MorseVerdict(Enum):
    MORSE = "Morse"
    NOT_MORSE = "NotMorse"
    MORSE_ON_SEARCHED_REGION = "MorseOnSearchedRegion"


@dataclass(frozen=True)
class CriticalPoint:
    location: tuple[float, ...]
    gradient_norm: float
    hessian_eigenvalues: tuple[float, ...]
    classification: PointKind


@dataclass(frozen=True)
class MorseReport:
    points: tuple[CriticalPoint, ...]
    verdict: MorseVerdict
    search_box: tuple[tuple[float, float], ...]
    dedup_radius: float
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class ZeroSetReport:
    zeros: tuple[tuple[float, ...], ...]
    all_interior: Optional[bool]
    finite_heuristic: bool
    notes: tuple[str, ...] = ()


# -- critical points -----------------------------------------------------------


def _validate_box(box: Box, n: int) -> tuple[tuple[float, float], ...]:
    box = tuple((float(lo), float(hi)) for lo, hi in box)
    if len(box) != n:
        raise MorseError(f"box has {len(box)} intervals, expected {n}")
    if any(hi <= lo for lo, hi in box):
        raise MorseError("degenerate box")
    return box


def _univariate_coefficients(f: Polynomial) -> list[float]:
    deg = int(f.degree())
    coeffs = [0.0] * (deg + 1)
    for expo, c in f.terms.items():
        coeffs[expo[0]] = float(c)
    return coeffs


def _real_roots_univariate(f: Polynomial, refine_on: Polynomial) -> list[float]:
    """All real roots of f via companion-matrix eigenvalues plus Newton polish."""
    coeffs = _univariate_coefficients(f)
    deg = len(coeffs) - 1
    if deg < 1:
        return []
    companion = np.zeros((deg, deg))
    companion[1:, :-1] = np.eye(deg - 1)
    companion[:, -1] = [-c / coeffs[deg] for c in coeffs[:deg]]
    eigs = np.linalg.eigvals(companion)
    df = refine_on.differentiate(1)
    roots = []
    for z in eigs:
        if abs(z.imag) > 1e-7 * (1.0 + abs(z.real)):
            continue
        x = float(z.real)
        for _ in range(60):
            fx = refine_on.evaluate((x,))
            dfx = df.evaluate((x,))
            if dfx == 0.0 or abs(fx) < 1e-300:
                break
            step = fx / dfx
            x -= step
            if abs(step) <= 1e-15 * (1.0 + abs(x)):
                break
        roots.append(x)
    return roots


def _dedupe(points: list[np.ndarray], radius: float) -> list[np.ndarray]:
    kept: list[np.ndarray] = []
    for p in sorted(points, key=lambda q: tuple(q)):
        if all(float(np.linalg.norm(p - q)) > radius for q in kept):
            kept.append(p)
    return kept


def critical_points(
    f: Polynomial, box: Box, config: MorseConfig = MorseConfig()
) -> tuple[CriticalPoint, ...]:
    """Zeros of the gradient.

    n = 1: exact root isolation of f' (box ignored), so the list is complete.
    n >= 2: multi-start damped Newton inside the box; completeness is not
    guaranteed and the Morse verdict says so.
    """
    if f.degree() < 1:
        raise MorseError("constant polynomials have no isolated critical points")
    n = f.num_vars
    found: list[np.ndarray] = []
    if n == 1:
        df = f.differentiate(1)
        if df.degree() < 1:
            found = []
            if df.is_zero():
                raise MorseError("constant polynomials have no isolated critical points")
        else:
            found = [np.array([r]) for r in _real_roots_univariate(df, df)]
    else:
        box = _validate_box(box, n)
        lo = np.array([b[0] for b in box])
        hi = np.array([b[1] for b in box])
        starts = halton_grid(config.grid_starts, n) * (hi - lo) + lo
        for x0 in starts:
            x, gn = damped_newton_gradient(f, x0, max_iter=config.newton_max_iter)
            if gn <= config.gradient_tolerance and np.all(x >= lo - 1e-6) and np.all(
                x <= hi + 1e-6
            ):
                found.append(x)
    found = _dedupe(found, config.dedup_radius)

    grad = f.gradient()
    hess = f.hessian()
    out = []
    for x in found:
        loc = tuple(float(v) for v in x)
        gnorm = float(np.linalg.norm([g.evaluate(loc) for g in grad]))
        if gnorm > config.gradient_tolerance:
            continue
        h = np.array(
            [[hess[i][j].evaluate(loc) for j in range(n)] for i in range(n)]
        )
        eigs = np.linalg.eigvalsh(h)
        thr = config.hessian_tolerance * max(1.0, float(np.linalg.norm(h, 2)))
        if float(np.min(np.abs(eigs))) <= thr:
            kind = PointKind.DEGENERATE
        elif float(eigs[0]) > thr:
            kind = PointKind.NONDEGENERATE_MIN
        elif float(eigs[-1]) < -thr:
            kind = PointKind.NONDEGENERATE_MAX
        else:
            kind = PointKind.NONDEGENERATE_SADDLE
        out.append(CriticalPoint(loc, gnorm, tuple(float(e) for e in eigs), kind))
    return tuple(sorted(out, key=lambda p: p.location))


def morse_verdict(
    f: Polynomial,
    points: Sequence[CriticalPoint],
    box: Box = ((-10.0, 10.0),),
    config: MorseConfig = MorseConfig(),
) -> MorseReport:
    """Aggregate a critical-point list into a Morse report."""
    notes: list[str] = []
    if any(p.classification is PointKind.DEGENERATE for p in points):
        verdict = MorseVerdict.NOT_MORSE
    elif f.num_vars == 1:
        verdict = MorseVerdict.MORSE
        notes.append("univariate root isolation is exact, so the verdict is global")
    else:
        verdict = MorseVerdict.MORSE_ON_SEARCHED_REGION
        notes.append("multi-start search cannot certify completeness for n >= 2")
    try:
        sbox = _validate_box(box, f.num_vars)
    except MorseError:
        sbox = tuple((-10.0, 10.0) for _ in range(f.num_vars))
    return MorseReport(tuple(points), verdict, sbox, config.dedup_radius, tuple(notes))


# -- zeros on a constraint set ----------------------------------------------------


def _abs_magnitude(p: Polynomial, x: Sequence[float]) -> float:
    return Polynomial(p.num_vars, {e: abs(c) for e, c in p.terms.items()}).evaluate(
        [abs(v) for v in x]
    )


def zeros_on_set(
    f: Polynomial,
    constraints: Optional[PolynomialSystem],
    box: Box,
    config: MorseConfig = MorseConfig(),
) -> ZeroSetReport:
    """Zeros of f on {g_i >= 0} inside the box, with interiority per zero.

    ``constraints`` may be None for the unconstrained case, where interiority
    is vacuously true.  The zero list comes from multi-start root driving on
    f and is a heuristic; ``finite_heuristic`` turns false when the zeros
    look like a sampled curve rather than isolated points.
    """
    n = f.num_vars
    box = _validate_box(box, n)
    gs = list(constraints) if constraints is not None else []
    if any(g.num_vars != n for g in gs):
        raise PolynomialError("constraints live in a different ambient space")
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    starts = halton_grid(config.grid_starts, n) * (hi - lo) + lo
    grad = f.gradient()

    def residual(x):
        return np.array([f.evaluate(x)])

    def jacobian(x):
        return np.array([[g.evaluate(x) for g in grad]])

    zeros: list[np.ndarray] = []
    sampled_min = float("inf")
    for x0 in starts:
        sampled_min = min(sampled_min, abs(f.evaluate(x0)))
        x, _ = levenberg_marquardt(
            residual, jacobian, x0, max_iter=config.newton_max_iter, tol=0.0
        )
        val = abs(f.evaluate(x))
        if val > config.zero_tolerance * (1.0 + _abs_magnitude(f, x)):
            continue
        if np.any(x < lo - 1e-6) or np.any(x > hi + 1e-6):
            continue
        feasible = all(
            g.evaluate(x) >= -1e-7 * (1.0 + _abs_magnitude(g, x)) for g in gs
        )
        if feasible:
            zeros.append(np.asarray(x, dtype=float))
    zeros = _dedupe(zeros, config.dedup_radius)

    notes: list[str] = []
    if not gs:
        notes.append("no constraints: interiority is vacuous")
    if not zeros:
        confident = sampled_min > 10 * config.zero_tolerance
        return ZeroSetReport(
            (),
            True if confident else None,
            True,
            tuple(notes + ["no zeros found on the searched region"]),
        )

    all_interior: Optional[bool] = True
    for z in zeros:
        if any(g.evaluate(z) <= config.interior_tolerance for g in gs):
            all_interior = False
            break

    finite = True
    if len(zeros) >= 8:
        dists = []
        for i, z in enumerate(zeros):
            others = [np.linalg.norm(z - w) for j, w in enumerate(zeros) if j != i]
            dists.append(min(others))
        dists = sorted(dists)
        median = dists[len(dists) // 2]
        if len(zeros) >= 24 or (median > 0 and dists[-1] <= 10.0 * median):
            finite = False
            notes.append("zeros cluster like a sampled curve")

    return ZeroSetReport(
        tuple(tuple(float(v) for v in z) for z in zeros),
        all_interior,
        finite,
        tuple(notes),
    )


def rational_gradient_norm(f: Polynomial, point: Sequence[float], digits: int = 12):
    """Exact gradient norm (squared) at a rational rounding of the point."""
    rat = [Fraction(v).limit_denominator(10**digits) for v in point]
    total = Fraction(0)
    for i in range(1, f.num_vars + 1):
        gi = f.differentiate(i).evaluate_exact(rat)
        total += gi * gi
    return total
