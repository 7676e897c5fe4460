"""Acceptance suite: one test per shipping criterion, at pinned tolerances.

Each test prints a single PASS/FAIL line outside pytest's capture so the
ledger of criteria is visible in any run mode, and asserts the same condition.
"""

import time
from pathlib import Path

from suites import (
    analytic_sdp_suite,
    euler_identity_suite,
    hull_oracle_suite,
    moment_entry_suite,
)
from polycert.morse import MorseVerdict, PointKind, critical_points, morse_verdict, zeros_on_set
from polycert.nondegen import (
    CompactnessConclusion,
    SearchConfig,
    VerdictStatus,
    compactness_certificate,
)
from polycert.polynomial import parse_polynomial, PolynomialSystem
from polycert.relax import (
    ProbeOutcome,
    gradient_relaxation,
    kkt_system,
    lasserre_relaxation,
    membership_probe,
    solve_relaxation,
)
from polycert.sdp import SolverStatus

NONNEG_NOT_SOS = "x^4*y^2 + x^2*y^4 - 3*x^2*y^2 + 1"
CUBED_INTERVAL_G = "1 - 3*x^2 + 3*x^4 - x^6"  # (1 - x^2)^3 expanded


import pytest


@pytest.fixture
def announce(capfd):
    def _announce(number: int, description: str, ok: bool):
        line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {description}"
        with capfd.disabled():
            print(line, flush=True)
        assert ok, line

    return _announce


def poly(text, names=("x",)):
    return parse_polynomial(text, list(names))


def test_criterion_1_gradient_cubic_not_attained(announce):
    f = poly("x^3")
    ok = True
    for order in (1, 2, 3, 4):
        t0 = time.perf_counter()
        result = solve_relaxation(gradient_relaxation(f, order))
        elapsed = time.perf_counter() - t0
        ok &= result.status is SolverStatus.OPTIMAL
        ok &= abs(result.lower_bound - 0.0) <= 1e-6
        ok &= elapsed < 1.0
    announce(1, "gradient relaxation of x^3 is 0 +/- 1e-6 for orders 1..4, <1s each", ok)


def test_criterion_2_gradient_morse_finite_convergence(announce):
    ok = True
    t0 = time.perf_counter()
    f1 = poly("x^4 - 2*x^2 + 1")
    r1 = solve_relaxation(gradient_relaxation(f1, 2))
    ok &= r1.status is SolverStatus.OPTIMAL and abs(r1.lower_bound) <= 1e-6
    pts = critical_points(f1, ((-3.0, 3.0),))
    report = morse_verdict(f1, pts, ((-3.0, 3.0),))
    ok &= report.verdict is MorseVerdict.MORSE
    ok &= len(report.points) == 3
    ok &= all(p.classification is not PointKind.DEGENERATE for p in report.points)
    ok &= (time.perf_counter() - t0) < 5.0

    t0 = time.perf_counter()
    f2 = parse_polynomial("x1^4 + x2^4 - 2*x1^2 - 2*x2^2 + 2", ["x1", "x2"])
    r2 = solve_relaxation(gradient_relaxation(f2, 2))
    ok &= r2.status is SolverStatus.OPTIMAL and abs(r2.lower_bound) <= 1e-5
    ok &= (time.perf_counter() - t0) < 5.0
    announce(2, "Morse finite convergence at order 2 for both quartics, <5s each", ok)


def test_criterion_3_lasserre_interval(announce):
    f = poly("x")
    g = PolynomialSystem([poly("1 - x^2")])
    result = solve_relaxation(lasserre_relaxation(f, g, 1))
    ok = result.status is SolverStatus.OPTIMAL
    ok &= abs(result.lower_bound + 1.0) <= 1e-6
    ok &= result.extraction is not None and result.extraction.rank_ratio <= 1e-5
    ok &= len(result.candidates) == 1
    ok &= abs(result.candidates[0]["point"][0] + 1.0) <= 1e-4
    announce(3, "constrained relaxation of x on [-1,1]: bound -1, rank-one minimizer -1", ok)


def test_criterion_4_nonmembership_regressions(announce):
    ok = True
    f = poly("1 - x^2")
    g = PolynomialSystem([poly(CUBED_INTERVAL_G)])
    for order in range(1, 7):  # degree caps 2N <= 12
        t0 = time.perf_counter()
        result = membership_probe(f, g, order, mode="quadratic_module")
        elapsed = time.perf_counter() - t0
        ok &= result.outcome is ProbeOutcome.INFEASIBLE
        ok &= result.residual <= 1e-7
        ok &= elapsed < 10.0
    t0 = time.perf_counter()
    sextic = parse_polynomial(NONNEG_NOT_SOS, ["x", "y"])
    result = membership_probe(sextic, None, 3, mode="sos")
    elapsed = time.perf_counter() - t0
    ok &= result.outcome is ProbeOutcome.INFEASIBLE
    ok &= result.residual <= 1e-7
    ok &= elapsed < 10.0
    announce(4, "certified non-membership: boundary-zero instance through 2N=12 and "
                "the classic sextic at order 3, residuals <= 1e-7", ok)


def test_criterion_5_compactness_certificates(announce):
    cfg = SearchConfig()
    t0 = time.perf_counter()
    circle = PolynomialSystem([parse_polynomial("x^2 + y^2 - 1", ["x", "y"])])
    cert = compactness_certificate(circle, cfg)
    ok = cert.conclusion is CompactnessConclusion.CERTIFIED_COMPACT
    v1 = cert.sub_verdicts.get("nondegenerate_at_infinity")
    v2 = cert.sub_verdicts.get("strongly_g_adapted")
    ok &= v1 is not None and v1.status is VerdictStatus.CERTIFIED
    ok &= v2 is not None and v2.status is VerdictStatus.CERTIFIED
    # face log must match the hand enumeration
    parts1 = {fc.parts[0] for fc in v1.faces}
    ok &= parts1 == {"x1^2", "x2^2", "x1^2 + x2^2"}
    full = [fc for fc in v2.faces if fc.label.startswith("I={}")]
    ok &= any(fc.parts == ("x1^2 + x2^2",) for fc in full)
    restricted = {fc.parts[0] for fc in v2.faces if not fc.label.startswith("I={}")}
    ok &= restricted == {"x1^2"}
    ok &= (time.perf_counter() - t0) < 5.0

    t0 = time.perf_counter()
    line = PolynomialSystem([parse_polynomial("x - y", ["x", "y"])])
    cert2 = compactness_certificate(line, cfg)
    degenerate = [
        v for v in cert2.sub_verdicts.values() if v.status is VerdictStatus.DEGENERATE
    ]
    ok &= len(degenerate) >= 1
    witness = degenerate[0].witness
    ok &= witness is not None and min(abs(c) for c in witness) > 1e-6
    ok &= cert2.conclusion is CompactnessConclusion.WITNESS_NONCOMPACT_HINT
    ok &= (time.perf_counter() - t0) < 5.0
    announce(5, "circle certified compact by both routes with matching face log; "
                "x - y degenerate with a torus witness, <5s each", ok)


def test_criterion_6_zero_hypothesis_checks(announce):
    f = poly("1 - x^2")
    g = PolynomialSystem([poly(CUBED_INTERVAL_G)])
    report = zeros_on_set(f, g, ((-2.0, 2.0),))
    locs = sorted(z[0] for z in report.zeros)
    ok = len(locs) == 2
    ok &= abs(locs[0] + 1.0) <= 1e-6 and abs(locs[1] - 1.0) <= 1e-6
    ok &= report.all_interior is False

    f2 = parse_polynomial("x1^2 + x2^2", ["x1", "x2"])
    g2 = PolynomialSystem([parse_polynomial("1 - x1^2 - x2^2", ["x1", "x2"])])
    report2 = zeros_on_set(f2, g2, ((-2.0, 2.0), (-2.0, 2.0)))
    ok &= len(report2.zeros) == 1
    ok &= report2.all_interior is True
    announce(6, "boundary zeros {-1, 1} flagged non-interior; one interior zero on the disk", ok)


def test_criterion_7_property_suites(announce):
    t0 = time.perf_counter()
    hull_oracle_suite(trials=200, seed=0)
    euler_identity_suite(trials=100, seed=1)
    moment_entry_suite(trials=100, seed=2)
    analytic_sdp_suite(trials=20, seed=3, tol=1e-7)
    system = kkt_system(poly("x"), PolynomialSystem([poly("1 - x^2")]))
    ok = system.residual((1.0, -0.5)) <= 1e-7
    ok &= system.residual((-1.0, 0.5)) <= 1e-7
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 300.0
    announce(7, "property suites: 200 hull oracles, 100 Euler identities, 100 moment "
                "entry laws, 20 analytic SDPs, KKT residuals at hand-solved points", ok)


def test_criterion_8_out_of_scope_exclusions_documented(announce):
    readme = Path(__file__).resolve().parent.parent / "README.md"
    text = readme.read_text() if readme.exists() else ""
    ok = "out of scope" in text.lower() or "not reproduced" in text.lower()
    announce(8, "existence-theorem content is documented as out of scope, not reproduced", ok)
