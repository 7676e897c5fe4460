"""Counted property suites shared by the acceptance module and pytest."""

from fractions import Fraction

import numpy as np

from exactlp import brute_force_vertices
from polycert.polynomial import Polynomial
from polycert.polytope import ExponentHull, face_support
from polycert.nondegen import principal_part_global
from polycert.relax import (
    localizing_matrix,
    moment_basis,
    moment_matrix,
    moment_matrix_spec,
)
from polycert.sdp import Block, LmiProblem, SolverConfig, SolverStatus, solve_lmi


def random_support(rng, n, max_points=12, max_exp=6):
    count = int(rng.integers(1, max_points + 1))
    pts = {
        tuple(int(e) for e in rng.integers(0, max_exp + 1, size=n))
        for _ in range(count)
    }
    return pts


def hull_oracle_suite(trials=200, seed=0):
    """Hull vertices equal the brute-force convex-combination-LP vertices."""
    rng = np.random.default_rng(seed)
    for t in range(trials):
        n = int(rng.integers(1, 4))
        pts = random_support(rng, n)
        hull = ExponentHull(pts)
        oracle = brute_force_vertices(pts)
        assert hull.vertices == oracle, (pts, hull.vertices, oracle)


def random_polynomial(rng, n, max_terms=6, max_exp=5):
    terms = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        expo = tuple(int(e) for e in rng.integers(0, max_exp + 1, size=n))
        coeff = Fraction(int(rng.integers(-9, 10)))
        if coeff:
            terms[expo] = coeff
    if not terms:
        terms[(0,) * n] = Fraction(1)
    return Polynomial(n, terms)


def euler_identity_suite(trials=100, seed=1):
    """sum_i w_i x_i d(f_w)/dx_i equals m(w, f) * f_w exactly."""
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        n = int(rng.integers(1, 4))
        f = random_polynomial(rng, n)
        w = tuple(int(v) for v in rng.integers(-4, 5, size=n))
        part = principal_part_global(f, [w])
        value = face_support(f, w).value
        acc = Polynomial.zero(n)
        for i in range(1, n + 1):
            acc = acc + Fraction(w[i - 1]) * Polynomial.variable(n, i) * part.differentiate(i)
        assert acc == Fraction(value) * part


def moment_entry_suite(trials=100, seed=2):
    """Entry law and localizing linearity over exact rational moments."""
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        n = int(rng.integers(1, 3))
        deg = int(rng.integers(1, 3))
        spec = moment_matrix_spec(n, deg)
        # shift polynomials below have per-variable exponents <= 2, so the
        # localizing entries reach degree 2*deg + 2*n at most
        y = {
            m: Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))
            for m in moment_basis(n, 2 * deg + 2 * n).monomials
        }
        mat = moment_matrix(spec, y)
        s = len(spec.basis)
        for i in range(s):
            for j in range(s):
                assert mat[i][j] == y[spec.entry_exponent(i, j)]
        g = random_polynomial(rng, n, max_terms=3, max_exp=2)
        h = random_polynomial(rng, n, max_terms=3, max_exp=2)
        a = Fraction(int(rng.integers(-5, 6)))
        lhs = localizing_matrix(a * g + h, spec, y)
        rhs = a * localizing_matrix(g, spec, y) + localizing_matrix(h, spec, y)
        assert np.array_equal(lhs, rhs)


def analytic_sdp_suite(trials=20, seed=3, tol=1e-7):
    """Extreme-eigenvalue SDPs with closed-form optima: weak duality and PSD
    residual at the returned point."""
    rng = np.random.default_rng(seed)
    for t in range(trials):
        n = 2 + t % 2
        a = rng.normal(size=(n, n))
        a = (a + a.T) / 2.0
        if t % 2 == 0:
            # minimize t with t I - A >= 0: optimum is the top eigenvalue
            problem = LmiProblem(
                1, np.array([-1.0]), [Block(-a, np.array([np.eye(n)]))]
            )
            target = float(np.linalg.eigvalsh(a)[-1])
            sol = solve_lmi(problem, SolverConfig(trace=True))
            value = -sol.objective
        else:
            # maximize t with A - t I >= 0: optimum is the bottom eigenvalue
            problem = LmiProblem(
                1, np.array([1.0]), [Block(a, np.array([-np.eye(n)]))]
            )
            target = float(np.linalg.eigvalsh(a)[0])
            sol = solve_lmi(problem, SolverConfig(trace=True))
            value = sol.objective
        assert sol.status is SolverStatus.OPTIMAL
        assert abs(value - target) <= tol * (1.0 + abs(target))
        assert sol.min_block_eigenvalue >= -1e-8
        for entry in sol.trace:
            # weak duality with slack for the infeasibility of interior
            # iterates: the residual terms enter the gap identity
            scale = 1.0 + abs(entry["pobj"]) + abs(entry["dobj"])
            slack = 10.0 * entry["mu"] + 50.0 * (entry["pres"] + entry["dres"]) * scale
            assert entry["dobj"] <= entry["pobj"] + slack + 1e-6
