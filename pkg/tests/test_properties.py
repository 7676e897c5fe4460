from fractions import Fraction

import numpy as np

from suites import (
    analytic_sdp_suite,
    euler_identity_suite,
    hull_oracle_suite,
    moment_entry_suite,
    random_polynomial,
)
from polycert.nondegen import (
    SearchConfig,
    VerdictStatus,
    coordinate_restriction,
    nondegenerate_at_infinity,
    principal_part_global,
)
from polycert.polynomial import Polynomial, PolynomialSystem, parse_polynomial
from polycert.polytope import (
    face_support,
    g_transform_data,
    global_newton_polytope,
    local_newton_polytope,
    local_polytope_is_convenient,
)
from polycert.relax import gradient_relaxation, gradient_sos_lmi, solve_relaxation
from polycert.sdp import SolverStatus, solve_lmi

CFG = SearchConfig(starts_per_orthant=4, max_iterations=80)


def test_hull_oracle_small_batch():
    hull_oracle_suite(trials=40, seed=100)


def test_euler_identity_small_batch():
    euler_identity_suite(trials=30, seed=101)


def test_moment_entry_small_batch():
    moment_entry_suite(trials=30, seed=102)


def test_analytic_sdp_small_batch():
    analytic_sdp_suite(trials=6, seed=103)


def test_polytope_value_clamps_at_origin():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n = int(rng.integers(1, 4))
        f = random_polynomial(rng, n)
        w = tuple(int(v) for v in rng.integers(-4, 5, size=n))
        supp_val = face_support(f, w).value
        poly_val = face_support(f, w, over_polytope=True).value
        assert poly_val == max(0, supp_val)


def test_principal_part_quasi_homogeneity_numeric():
    rng = np.random.default_rng(8)
    for _ in range(25):
        n = int(rng.integers(1, 4))
        f = random_polynomial(rng, n)
        w = tuple(int(v) for v in rng.integers(-3, 4, size=n))
        part = principal_part_global(f, [w])
        if part.is_zero():
            continue
        m = float(face_support(f, w).value)
        t = float(rng.uniform(0.5, 2.0))
        x = rng.uniform(0.4, 1.6, size=n) * rng.choice([-1.0, 1.0], size=n)
        scaled = tuple(t ** wi * xi for wi, xi in zip(w, x))
        lhs = part.evaluate(scaled)
        rhs = t**m * part.evaluate(x)
        assert abs(lhs - rhs) <= 1e-7 * max(1.0, abs(rhs))


def test_restriction_commutes_with_principal_parts_axis_aligned():
    # pushing the dropped axis hard negative makes the principal part select
    # the restriction first, so the two operations commute
    rng = np.random.default_rng(9)
    checked = 0
    while checked < 25:
        n = int(rng.integers(2, 4))
        f = random_polynomial(rng, n)
        axis = int(rng.integers(1, n + 1))
        restricted = coordinate_restriction(f, [axis])
        if restricted.is_zero():
            continue
        w_rest = tuple(int(v) for v in rng.integers(-3, 4, size=n - 1))
        big = 2 * int(f.degree()) * (1 + max(abs(v) for v in w_rest)) + 1
        w_full = list(w_rest)
        w_full.insert(axis - 1, -big)
        part_then_restrict = coordinate_restriction(
            principal_part_global(f, [tuple(w_full)]), [axis]
        )
        restrict_then_part = principal_part_global(restricted, [w_rest])
        assert part_then_restrict == restrict_then_part
        checked += 1


def test_adding_monomial_component_preserves_certification():
    rng = np.random.default_rng(10)
    for _ in range(6):
        f = random_polynomial(rng, 2, max_terms=4, max_exp=3)
        if f.is_zero():
            continue
        base = PolynomialSystem([f])
        before = nondegenerate_at_infinity(base, CFG)
        extended = PolynomialSystem([f, parse_polynomial("x^2*y", ["x", "y"])])
        after = nondegenerate_at_infinity(extended, CFG)
        if before.status is VerdictStatus.CERTIFIED:
            assert after.status is VerdictStatus.CERTIFIED


def test_g_transform_local_polytope_always_convenient():
    rng = np.random.default_rng(11)
    produced = 0
    while produced < 15:
        n = int(rng.integers(1, 4))
        f = random_polynomial(rng, n, max_terms=4, max_exp=3)
        if f.is_zero():
            continue
        # force convenience by adding pure powers on every axis
        terms = dict(f.terms)
        for i in range(n):
            expo = tuple(2 if j == i else 0 for j in range(n))
            terms.setdefault(expo, Fraction(1))
        gamma = global_newton_polytope(Polynomial(n, terms))
        data = g_transform_data(gamma)
        assert local_polytope_is_convenient(data.local_polytope)
        produced += 1


def test_local_facet_normals_primitive_and_supported():
    from math import gcd

    rng = np.random.default_rng(12)
    for _ in range(20):
        n = int(rng.integers(1, 4))
        f = random_polynomial(rng, n)
        if f.is_zero():
            continue
        local = local_newton_polytope(f)
        for v, offset in local.facet_normals:
            g = 0
            for entry in v:
                g = gcd(g, abs(entry))
            assert g == 1
            assert all(entry >= 0 for entry in v)
            vals = [sum(a * b for a, b in zip(v, p)) for p in local.generators]
            assert min(vals) == offset


def test_sos_moment_weak_duality_random_instances():
    rng = np.random.default_rng(13)
    done = 0
    while done < 4:
        # random univariate even-degree objective, bounded below
        coeffs = {(4,): Fraction(1)}
        for e in range(4):
            c = Fraction(int(rng.integers(-3, 4)))
            if c:
                coeffs[(e,)] = c
        f = Polynomial(1, coeffs)
        moment = solve_relaxation(gradient_relaxation(f, 2))
        lmi, _ = gradient_sos_lmi(f, 2)
        sos = solve_lmi(lmi)
        if moment.status is SolverStatus.OPTIMAL and sos.status is SolverStatus.OPTIMAL:
            assert sos.objective <= moment.lower_bound + 1e-6
            done += 1
