"""Moment and SOS relaxations assembled as small dense LMI problems.

Moment-side problems share one variable convention: the vector y is indexed
by monomials in graded lex order up to the moment degree, with the constant
moment pinned to one.  Ideal constraints (gradient or KKT generators) enter
as localizing equality shifts: L(u * h) = 0 for every monomial u whose
product stays within the moment degree, which keeps the assembly exact and
avoids any basis elimination.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from polycert.polynomial import (
    Exponent,
    Polynomial,
    PolynomialError,
    PolynomialSystem,
)
from polycert.sdp import (
    Block,
    Certificate,
    LmiProblem,
    SolverConfig,
    SolverStatus,
    solve_lmi,
)


class RelaxError(ValueError):
    """Raised for degree floors and malformed relaxation inputs."""


# -- moment basis and matrices -----------------------------------------------------


def _monomials_of_degree(num_vars: int, degree: int):
    """Exponents of one degree block, x1-heavy first."""
    if num_vars == 1:
        yield (degree,)
        return
    for head in range(degree, -1, -1):
        for tail in _monomials_of_degree(num_vars - 1, degree - head):
            yield (head,) + tail


@dataclass(frozen=True)
class MomentBasis:
    """Monomials of degree <= degree in graded lex order: 1, x1, ..., xn,
    x1^2, x1 x2, ..., xn^2, ..."""

    num_vars: int
    degree: int
    monomials: tuple[Exponent, ...]
    index: dict[Exponent, int] = field(hash=False, compare=False, default_factory=dict)

    def __len__(self):
        return len(self.monomials)


def moment_basis(num_vars: int, degree: int) -> MomentBasis:
    mons: list[Exponent] = []
    for d in range(degree + 1):
        mons.extend(_monomials_of_degree(num_vars, d))
    expected = math.comb(num_vars + degree, degree)
    assert len(mons) == expected
    return MomentBasis(num_vars, degree, tuple(mons), {m: i for i, m in enumerate(mons)})


@dataclass(frozen=True)
class MomentMatrixSpec:
    basis: MomentBasis

    def entry_exponent(self, i: int, j: int) -> Exponent:
        a = self.basis.monomials[i]
        b = self.basis.monomials[j]
        return tuple(x + y for x, y in zip(a, b))

    @property
    def entry_index(self) -> dict[tuple[int, int], Exponent]:
        s = len(self.basis)
        return {(i, j): self.entry_exponent(i, j) for i in range(s) for j in range(s)}


def moment_matrix_spec(num_vars: int, degree: int) -> MomentMatrixSpec:
    return MomentMatrixSpec(moment_basis(num_vars, degree))


def _lookup(y: Mapping[Exponent, object], expo: Exponent):
    try:
        return y[expo]
    except KeyError:
        raise RelaxError(f"missing moment index {expo}") from None


def moment_matrix(spec: MomentMatrixSpec, y: Mapping[Exponent, object]) -> np.ndarray:
    """Matrix with entries y_{beta_i + beta_j} over the basis."""
    s = len(spec.basis)
    rows = [[_lookup(y, spec.entry_exponent(i, j)) for j in range(s)] for i in range(s)]
    return np.array(rows)


def localizing_matrix(
    g: Polynomial, spec: MomentMatrixSpec, y: Mapping[Exponent, object]
) -> np.ndarray:
    """Matrix with entries sum_alpha g_alpha y_{beta_i + beta_j + alpha}."""
    if g.num_vars != spec.basis.num_vars:
        raise PolynomialError("shift polynomial lives in a different ambient space")
    s = len(spec.basis)
    out = []
    for i in range(s):
        row = []
        for j in range(s):
            base = spec.entry_exponent(i, j)
            total = None
            for alpha, c in g.terms.items():
                target = tuple(a + b for a, b in zip(base, alpha))
                val = c * _lookup(y, target)
                total = val if total is None else total + val
            row.append(total if total is not None else 0)
        out.append(row)
    return np.array(out)


def point_moment_vector(point: Sequence, num_vars: int, degree: int) -> dict[Exponent, float]:
    """Moments of the point evaluation (Dirac measure) at the given point."""
    out: dict[Exponent, float] = {}
    for mono in moment_basis(num_vars, degree).monomials:
        val = 1.0
        for x, e in zip(point, mono):
            val *= float(x) ** e
        out[mono] = val
    return out


# -- relaxation problems ----------------------------------------------------------


class RelaxationKind(Enum):
    GRADIENT = "gradient"
    LASSERRE = "lasserre"
    KKT = "kkt"


@dataclass
class RelaxationProblem:
    """A moment-side LMI: objective functional, PSD localizing blocks, and
    localizing equality shifts, over moments up to ``moment_degree``."""

    kind: RelaxationKind
    num_vars: int
    order: int
    moment_degree: int
    objective: dict[Exponent, Fraction]
    psd_blocks: list[tuple[Polynomial, int]]
    equalities: list[dict[Exponent, Fraction]]
    metadata: dict = field(default_factory=dict)
    sos_problem: Optional[LmiProblem] = None

    def moment_monomials(self) -> tuple[Exponent, ...]:
        return moment_basis(self.num_vars, self.moment_degree).monomials

    def debug_dump(self) -> dict:
        """Self-contained description with the full moment index map."""
        mons = self.moment_monomials()
        return {
            "kind": self.kind.value,
            "num_vars": self.num_vars,
            "order": self.order,
            "moment_degree": self.moment_degree,
            "moment_index": {str(i): list(m) for i, m in enumerate(mons)},
            "objective": {repr(list(a)): str(c) for a, c in sorted(self.objective.items())},
            "psd_blocks": [
                {"shift": str(g), "basis_degree": d} for g, d in self.psd_blocks
            ],
            "equalities": [
                {repr(list(a)): str(c) for a, c in sorted(row.items())}
                for row in self.equalities
            ],
            "metadata": {k: str(v) for k, v in self.metadata.items()},
        }


def _ideal_shift_rows(
    generators: Sequence[Polynomial], num_vars: int, cap: int
) -> list[dict[Exponent, Fraction]]:
    rows = []
    for h in generators:
        if h.is_zero():
            continue
        room = cap - int(h.degree())
        if room < 0:
            continue
        for u in moment_basis(num_vars, room).monomials:
            rows.append((Polynomial.monomial(num_vars, u) * h).terms)
    return rows


def relaxation_to_lmi(problem: RelaxationProblem) -> tuple[LmiProblem, list[Exponent]]:
    """Flatten a moment problem into the solver's LMI form.

    Variables are the moments except the constant one, which is pinned to 1
    and lands in the constant matrices; the LMI maximizes the negated
    objective so that its optimum is the moment infimum.
    """
    n = problem.num_vars
    mons = [m for m in problem.moment_monomials() if any(m)]
    index = {m: i for i, m in enumerate(mons)}
    k = len(mons)
    zero = (0,) * n

    blocks = []
    for g, bdeg in problem.psd_blocks:
        basis = moment_basis(n, bdeg)
        s = len(basis)
        const = np.zeros((s, s))
        coeffs = np.zeros((k, s, s))
        for i in range(s):
            for j in range(i, s):
                base = tuple(a + b for a, b in zip(basis.monomials[i], basis.monomials[j]))
                for alpha, c in g.terms.items():
                    target = tuple(a + b for a, b in zip(base, alpha))
                    if target not in index and target != zero:
                        raise RelaxError(
                            f"block entry references moment {target} beyond degree "
                            f"{problem.moment_degree}"
                        )
                    if target == zero:
                        const[i, j] += float(c)
                        if i != j:
                            const[j, i] += float(c)
                    else:
                        coeffs[index[target], i, j] += float(c)
                        if i != j:
                            coeffs[index[target], j, i] += float(c)
        blocks.append(Block(const, coeffs))

    eq_rows = []
    eq_rhs = []
    for row in problem.equalities:
        vec = np.zeros(k)
        rhs = 0.0
        for alpha, c in row.items():
            if alpha == zero:
                rhs -= float(c)
            else:
                if alpha not in index:
                    raise RelaxError(
                        f"equality references moment {alpha} beyond degree "
                        f"{problem.moment_degree}"
                    )
                vec[index[alpha]] += float(c)
        eq_rows.append(vec)
        eq_rhs.append(rhs)

    c_vec = np.zeros(k)
    for alpha, c in problem.objective.items():
        if alpha == zero:
            continue
        if alpha not in index:
            raise RelaxError(f"objective references moment {alpha} beyond the cap")
        c_vec[index[alpha]] -= float(c)

    lmi = LmiProblem(
        k,
        c_vec,
        blocks,
        np.vstack(eq_rows) if eq_rows else None,
        np.array(eq_rhs) if eq_rhs else None,
    )
    return lmi, mons


# -- the three relaxation builders ---------------------------------------------------


def gradient_relaxation(f: Polynomial, order: int) -> RelaxationProblem:
    """Moment relaxation of minimization over the gradient variety.

    The moment vector runs to max(2*order, deg f) so that odd-degree
    objectives stay expressible at low orders, and the gradient ideal enters
    through every localizing shift that fits.  The literal SOS side (maximize
    the shift gamma with polynomial multipliers on the partials) is assembled
    on demand by ``gradient_sos_lmi``.
    """
    d = int(f.degree())
    if d < 1:
        raise RelaxError("the objective must be nonconstant")
    if order < 1:
        raise RelaxError("the relaxation order must be at least 1")
    n = f.num_vars
    cap = max(2 * order, d)
    gens = [f.differentiate(i) for i in range(1, n + 1)]
    problem = RelaxationProblem(
        kind=RelaxationKind.GRADIENT,
        num_vars=n,
        order=order,
        moment_degree=cap,
        objective=dict(f.terms),
        psd_blocks=[(Polynomial.constant(n, 1), order)],
        equalities=_ideal_shift_rows(gens, n, cap),
        metadata={"objective_degree": d},
    )
    return problem


def gradient_sos_lmi(f: Polynomial, order: int) -> tuple[LmiProblem, dict]:
    """The SOS side: maximize gamma with f - gamma - sum_i phi_i d_i f a sum
    of squares, phi_i capped so products stay within the moment degree."""
    d = int(f.degree())
    n = f.num_vars
    cap = max(2 * order, d)
    gram_basis = moment_basis(n, order)
    s = len(gram_basis)
    gens = [f.differentiate(i) for i in range(1, n + 1)]
    phi_bases = []
    for g in gens:
        room = cap - int(g.degree()) if not g.is_zero() else -1
        phi_bases.append(moment_basis(n, room).monomials if room >= 0 else ())

    # variable layout: gamma, then phi coefficients, then gram upper triangle
    var_names: list[tuple] = [("gamma",)]
    for i, basis in enumerate(phi_bases):
        var_names.extend(("phi", i, b) for b in basis)
    gram_pairs = [(i, j) for i in range(s) for j in range(i, s)]
    var_names.extend(("q", i, j) for i, j in gram_pairs)
    k = len(var_names)
    pos = {name: i for i, name in enumerate(var_names)}

    const = np.zeros((s, s))
    coeffs = np.zeros((k, s, s))
    for i, j in gram_pairs:
        mat = np.zeros((s, s))
        mat[i, j] = 1.0
        mat[j, i] = 1.0
        coeffs[pos[("q", i, j)]] = mat
    blocks = [Block(const, coeffs)]

    rows: dict[Exponent, np.ndarray] = {}
    rhs: dict[Exponent, float] = {}
    for alpha in moment_basis(n, cap).monomials:
        rows[alpha] = np.zeros(k)
        rhs[alpha] = float(f.coefficient(alpha))
    zero = (0,) * n
    rows[zero][pos[("gamma",)]] = 1.0
    for gi, (g, basis) in enumerate(zip(gens, phi_bases)):
        for b in basis:
            for alpha, c in (Polynomial.monomial(n, b) * g).terms.items():
                rows[alpha][pos[("phi", gi, b)]] += float(c)
    for i, j in gram_pairs:
        alpha = tuple(
            a + b for a, b in zip(gram_basis.monomials[i], gram_basis.monomials[j])
        )
        rows[alpha][pos[("q", i, j)]] += 1.0 if i == j else 2.0

    eq_lhs = np.vstack([rows[a] for a in sorted(rows)])
    eq_rhs = np.array([rhs[a] for a in sorted(rows)])
    c_vec = np.zeros(k)
    c_vec[pos[("gamma",)]] = 1.0
    lmi = LmiProblem(k, c_vec, blocks, eq_lhs, eq_rhs)
    return lmi, {"gamma_index": pos[("gamma",)], "gram_size": s}


def lasserre_relaxation(
    f: Polynomial,
    constraints: PolynomialSystem,
    order: int,
    equality_constraints: Optional[PolynomialSystem] = None,
) -> RelaxationProblem:
    """The standard constrained moment LMI: a full moment block plus one
    localizing block per inequality, with the unit moment pinned."""
    n = f.num_vars
    if constraints.num_vars != n:
        raise PolynomialError("constraints live in a different ambient space")
    if f.degree() < 0:
        raise RelaxError("the objective must be nonzero")
    floor = max(
        (int(f.degree()) + 1) // 2,
        max((int(g.degree()) + 1) // 2 for g in constraints),
    )
    if equality_constraints is not None:
        floor = max(
            floor, max((int(h.degree()) + 1) // 2 for h in equality_constraints)
        )
    if order < floor:
        raise RelaxError(f"order {order} is below the degree floor {floor}")
    blocks: list[tuple[Polynomial, int]] = [(Polynomial.constant(n, 1), order)]
    for g in constraints:
        half = (int(g.degree()) + 1) // 2
        blocks.append((g, order - half))
    equalities: list[dict[Exponent, Fraction]] = []
    if equality_constraints is not None:
        equalities = _ideal_shift_rows(list(equality_constraints), n, 2 * order)
    return RelaxationProblem(
        kind=RelaxationKind.LASSERRE,
        num_vars=n,
        order=order,
        moment_degree=2 * order,
        objective=dict(f.terms),
        psd_blocks=blocks,
        equalities=equalities,
        metadata={"constraint_count": len(constraints)},
    )


# -- KKT system and relaxation ---------------------------------------------------------


def lift_polynomial(p: Polynomial, total_vars: int) -> Polynomial:
    """View p in a larger ring, appending fresh trailing variables."""
    if total_vars < p.num_vars:
        raise PolynomialError("cannot lift into a smaller ring")
    pad = total_vars - p.num_vars
    return Polynomial(
        total_vars, {e + (0,) * pad: c for e, c in p.terms.items()}
    )


@dataclass(frozen=True)
class KktSystem:
    """First-order stationarity generators in the extended (x, multiplier)
    ring: the Lagrangian gradient components followed by the complementarity
    products."""

    base_dim: int
    multiplier_dim: int
    gradient_generators: tuple[Polynomial, ...]
    complementarity_generators: tuple[Polynomial, ...]
    inequalities: tuple[Polynomial, ...]

    @property
    def generators(self) -> tuple[Polynomial, ...]:
        return self.gradient_generators + self.complementarity_generators

    def residual(self, point: Sequence[float]) -> float:
        return max(abs(g.evaluate(point)) for g in self.generators)


def kkt_system(f: Polynomial, constraints: PolynomialSystem) -> KktSystem:
    n = f.num_vars
    if constraints.num_vars != n:
        raise PolynomialError("constraints live in a different ambient space")
    m = len(constraints)
    total = n + m
    lifted_g = [lift_polynomial(g, total) for g in constraints]
    grads = []
    for i in range(1, n + 1):
        li = lift_polynomial(f.differentiate(i), total)
        for j, g in enumerate(lifted_g):
            lam = Polynomial.variable(total, n + j + 1)
            li = li - lam * g.differentiate(i)
        grads.append(li)
    comps = tuple(
        Polynomial.variable(total, n + j + 1) * g for j, g in enumerate(lifted_g)
    )
    return KktSystem(n, m, tuple(grads), comps, tuple(lifted_g))


def kkt_relaxation(
    f: Polynomial,
    constraints: PolynomialSystem,
    order: int,
    mode: str = "quadratic_module",
) -> RelaxationProblem:
    """Moment relaxation over the extended (x, multiplier) ring with the
    stationarity ideal as localizing equalities and the constraint blocks
    per quadratic-module or preordering mode."""
    if mode not in ("quadratic_module", "preordering"):
        raise RelaxError(f"unknown mode {mode!r}")
    system = kkt_system(f, constraints)
    m = system.multiplier_dim
    if mode == "preordering" and m > 6:
        raise RelaxError("preordering mode is capped at 6 constraints")
    total = system.base_dim + m
    f_ext = lift_polynomial(f, total)
    floor = (int(f.degree()) + 1) // 2
    for h in system.generators:
        floor = max(floor, (int(h.degree()) + 1) // 2)
    for g in system.inequalities:
        floor = max(floor, (int(g.degree()) + 1) // 2)
    if order < floor:
        raise RelaxError(f"order {order} is below the degree floor {floor}")

    blocks: list[tuple[Polynomial, int]] = [(Polynomial.constant(total, 1), order)]
    skipped: list[str] = []
    if mode == "quadratic_module":
        products: list[Polynomial] = list(system.inequalities)
    else:
        products = []
        for r in range(1, m + 1):
            for combo in itertools.combinations(system.inequalities, r):
                prod = Polynomial.constant(total, 1)
                for g in combo:
                    prod = prod * g
                products.append(prod)
    for g in products:
        half = (int(g.degree()) + 1) // 2
        if order - half < 0:
            skipped.append(str(g))
            continue
        blocks.append((g, order - half))

    return RelaxationProblem(
        kind=RelaxationKind.KKT,
        num_vars=total,
        order=order,
        moment_degree=2 * order,
        objective=dict(f_ext.terms),
        psd_blocks=blocks,
        equalities=_ideal_shift_rows(list(system.generators), total, 2 * order),
        metadata={
            "mode": mode,
            "base_dim": system.base_dim,
            "multiplier_dim": m,
            "skipped_products": skipped,
            "assumption": "the stationarity system is assumed to hold at some "
            "global minimizer; this regularity is not verified",
        },
    )


# -- membership probes ----------------------------------------------------------------


class ProbeOutcome(Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class ProbeResult:
    outcome: ProbeOutcome
    mode: str
    order: int
    gram_matrices: Optional[list[np.ndarray]] = None
    multipliers: Optional[list[Polynomial]] = None
    certificate: Optional[Certificate] = None
    solver_status: Optional[SolverStatus] = None
    residual: float = float("nan")


def _probe_multipliers(
    f: Polynomial, constraints: Optional[PolynomialSystem], mode: str
) -> list[Polynomial]:
    n = f.num_vars
    one = Polynomial.constant(n, 1)
    if mode == "sos":
        return [one]
    if constraints is None or len(constraints) == 0:
        return [one]
    if mode == "quadratic_module":
        return [one] + list(constraints)
    if mode == "preordering":
        if len(constraints) > 6:
            raise RelaxError("preordering mode is capped at 6 constraints")
        out = []
        for r in range(len(constraints) + 1):
            for combo in itertools.combinations(list(constraints), r):
                prod = one
                for g in combo:
                    prod = prod * g
                out.append(prod)
        return out
    raise RelaxError(f"unknown probe mode {mode!r}")


def membership_probe(
    f: Polynomial,
    constraints: Optional[PolynomialSystem],
    order: int,
    mode: str = "sos",
    config: SolverConfig = SolverConfig(),
) -> ProbeResult:
    """Decide f = sigma_0 + sum_i sigma_i * (products per mode) with SOS
    multipliers at matched degree caps.

    Infeasible is asserted only when the solver's separating certificate
    passes its residual check; everything else that is not a clean feasible
    point reports Inconclusive.
    """
    n = f.num_vars
    if 2 * order < f.degree():
        raise RelaxError("order below the degree of the target polynomial")
    mults = _probe_multipliers(f, constraints, mode)
    layouts = []
    for p in mults:
        room = order - (int(p.degree()) + 1) // 2 if not p.is_zero() else -1
        if room < 0:
            continue
        layouts.append((p, moment_basis(n, room)))
    if not layouts:
        raise RelaxError("every multiplier exceeds the degree cap")

    var_names: list[tuple] = []
    for li, (p, basis) in enumerate(layouts):
        s = len(basis)
        var_names.extend(("q", li, i, j) for i in range(s) for j in range(i, s))
    k = len(var_names)
    pos = {name: i for i, name in enumerate(var_names)}

    blocks = []
    for li, (p, basis) in enumerate(layouts):
        s = len(basis)
        coeffs = np.zeros((k, s, s))
        for i in range(s):
            for j in range(i, s):
                mat = np.zeros((s, s))
                mat[i, j] = 1.0
                mat[j, i] = 1.0
                coeffs[pos[("q", li, i, j)]] = mat
        blocks.append(Block(np.zeros((s, s)), coeffs))

    rows: dict[Exponent, np.ndarray] = {
        alpha: np.zeros(k) for alpha in moment_basis(n, 2 * order).monomials
    }
    for li, (p, basis) in enumerate(layouts):
        s = len(basis)
        for i in range(s):
            for j in range(i, s):
                shift = tuple(
                    a + b for a, b in zip(basis.monomials[i], basis.monomials[j])
                )
                weight = 1.0 if i == j else 2.0
                for alpha, c in p.terms.items():
                    target = tuple(a + b for a, b in zip(shift, alpha))
                    rows[target][pos[("q", li, i, j)]] += weight * float(c)
    ordered = sorted(rows)
    eq_lhs = np.vstack([rows[a] for a in ordered])
    eq_rhs = np.array([float(f.coefficient(a)) for a in ordered])

    lmi = LmiProblem(k, np.zeros(k), blocks, eq_lhs, eq_rhs)
    sol = solve_lmi(lmi, config)

    if sol.status is SolverStatus.OPTIMAL:
        grams = []
        for li, (p, basis) in enumerate(layouts):
            s = len(basis)
            q = np.zeros((s, s))
            for i in range(s):
                for j in range(i, s):
                    q[i, j] = q[j, i] = sol.z[pos[("q", li, i, j)]]
            grams.append(q)
        residual = max(0.0, -min(float(np.linalg.eigvalsh(q)[0]) for q in grams))
        return ProbeResult(
            ProbeOutcome.FEASIBLE,
            mode,
            order,
            gram_matrices=grams,
            multipliers=[p for p, _ in layouts],
            solver_status=sol.status,
            residual=residual,
        )
    if sol.status is SolverStatus.INFEASIBLE and sol.certificate is not None:
        return ProbeResult(
            ProbeOutcome.INFEASIBLE,
            mode,
            order,
            certificate=sol.certificate,
            solver_status=sol.status,
            residual=sol.certificate.residual,
        )
    return ProbeResult(
        ProbeOutcome.INCONCLUSIVE, mode, order, solver_status=sol.status
    )


# -- extraction and the solve driver -----------------------------------------------------


@dataclass
class ExtractionResult:
    candidates: list[tuple[float, ...]]
    eigenvalues: tuple[float, ...]
    rank_ratio: float
    note: str


def extract_minimizer(
    y: Mapping[Exponent, float],
    num_vars: int,
    order: int,
    rank_tolerance: float = 1e-5,
) -> ExtractionResult:
    """Rank-one reading of the moment matrix: when the second eigenvalue is
    negligible the first-order moments are the minimizer."""
    spec = moment_matrix_spec(num_vars, order)
    mat = np.array(moment_matrix(spec, y), dtype=float)
    eigs = np.linalg.eigvalsh(mat)
    top = float(eigs[-1])
    second = float(eigs[-2]) if len(eigs) > 1 else 0.0
    if top <= 0:
        return ExtractionResult([], tuple(eigs), float("inf"), "moment matrix is not positive")
    ratio = abs(second) / top
    if ratio > rank_tolerance:
        return ExtractionResult(
            [], tuple(eigs), ratio, f"numerical rank exceeds one (ratio {ratio:.2e})"
        )
    point = tuple(
        float(y[tuple(1 if k == i else 0 for k in range(num_vars))])
        for i in range(num_vars)
    )
    return ExtractionResult([point], tuple(eigs), ratio, "rank-one moment matrix")


@dataclass
class RelaxationResult:
    lower_bound: float
    status: SolverStatus
    moment_vector: Optional[dict[Exponent, float]]
    candidates: list[dict]
    gap: float
    extraction: Optional[ExtractionResult] = None
    metadata: dict = field(default_factory=dict)


def solve_relaxation(
    problem: RelaxationProblem,
    config: SolverConfig = SolverConfig(),
    rank_tolerance: float = 1e-5,
    verify_constraints: Optional[PolynomialSystem] = None,
) -> RelaxationResult:
    """Solve the moment side and, on success, attempt minimizer extraction.

    Candidate minimizers are verified by evaluating the objective (and the
    constraints, when supplied); the discrepancy against the bound is
    reported rather than hidden.
    """
    lmi, mons = relaxation_to_lmi(problem)
    sol = solve_lmi(lmi, config)
    meta = dict(problem.metadata)
    meta["solver_iterations"] = sol.iterations
    if sol.status is not SolverStatus.OPTIMAL:
        bound = float("-inf") if sol.status is SolverStatus.UNBOUNDED else float("nan")
        return RelaxationResult(
            bound, sol.status, None, [], float("nan"), None, meta
        )
    zero = (0,) * problem.num_vars
    y: dict[Exponent, float] = {zero: 1.0}
    for m, value in zip(mons, sol.z):
        y[m] = float(value)
    bound = sum(float(c) * y[a] for a, c in problem.objective.items())

    extraction = None
    candidates = []
    base_dim = meta.get("base_dim", problem.num_vars)
    try:
        extraction = extract_minimizer(y, problem.num_vars, problem.order, rank_tolerance)
        for cand in extraction.candidates:
            point = cand[:base_dim]
            f_val = sum(
                float(c) * math.prod(x**e for x, e in zip(cand, a))
                for a, c in problem.objective.items()
            )
            entry = {
                "point": point,
                "objective_value": f_val,
                "bound_discrepancy": f_val - bound,
            }
            if verify_constraints is not None:
                entry["constraint_values"] = [
                    g.evaluate(point) for g in verify_constraints
                ]
            candidates.append(entry)
    except RelaxError:
        pass
    return RelaxationResult(
        bound, sol.status, y, candidates, float(sol.duality_gap), extraction, meta
    )


def relaxation_ladder(
    build,
    orders: Iterable[int],
    config: SolverConfig = SolverConfig(),
    **kwargs,
) -> list[tuple[int, RelaxationResult]]:
    """Solve a family of relaxations of increasing order."""
    out = []
    for order in orders:
        out.append((order, solve_relaxation(build(order), config, **kwargs)))
    return out
