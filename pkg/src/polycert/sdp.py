"""Small dense SDP kernel in LMI form, plus SDPA sparse-format export.

The problem shape is

    maximize  c . z   subject to   A0 + sum_j z_j A_j  >= 0   (per block),
    optionally  B z = d,

solved by a primal-dual interior-point method on the homogeneous self-dual
embedding with Nesterov-Todd scaling and a Mehrotra predictor-corrector.
The embedding yields a clean three-way outcome: an optimal point, a Farkas
block matrix certifying infeasibility, or an improving ray certifying
unboundedness; certificates are re-verified against the original data before
any status is asserted.

Equality constraints are removed by nullspace elimination before the cone
solve, followed by facial-reduction rounds that pin matrix rows forced to
zero by a vanishing diagonal (common in moment problems with ideal
constraints, where the feasible set has empty interior).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

MAX_TOTAL_DIMENSION = 400


class SdpError(ValueError):
    """Raised for malformed LMI problems."""


class SolverStatus(Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "PrimalInfeasible"
    UNBOUNDED = "Unbounded"
    MAX_ITERATIONS = "MaxIterations"
    NUMERICAL_FAILURE = "NumericalFailure"


@dataclass(frozen=True)
class SolverConfig:
    gap_tolerance: float = 1e-8
    feas_tolerance: float = 1e-8
    psd_tolerance: float = 1e-8
    cert_tolerance: float = 1e-7
    max_iterations: int = 200
    step_fraction: float = 0.98
    trace: bool = False


@dataclass
class Block:
    """One PSD constraint block: const + sum_j z_j coeffs[j] >= 0."""

    const: np.ndarray
    coeffs: np.ndarray  # shape (k, n, n)

    @property
    def size(self) -> int:
        return self.const.shape[0]

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        return self.const + np.tensordot(z, self.coeffs, axes=(0, 0))


@dataclass
class LmiProblem:
    num_vars: int
    objective: np.ndarray
    blocks: list[Block]
    eq_lhs: Optional[np.ndarray] = None
    eq_rhs: Optional[np.ndarray] = None

    def validate(self):
        k = self.num_vars
        if self.objective.shape != (k,):
            raise SdpError("objective length disagrees with the variable count")
        if not self.blocks:
            raise SdpError("an LMI problem needs at least one block")
        total = 0
        for b in self.blocks:
            n = b.size
            total += n
            if b.const.shape != (n, n) or b.coeffs.shape != (k, n, n):
                raise SdpError("block matrices have inconsistent shapes")
            if not np.allclose(b.const, b.const.T, atol=1e-12):
                raise SdpError("non-symmetric constant matrix")
            for j in range(k):
                if not np.allclose(b.coeffs[j], b.coeffs[j].T, atol=1e-12):
                    raise SdpError("non-symmetric coefficient matrix")
        if total > MAX_TOTAL_DIMENSION:
            raise SdpError(
                f"total block dimension {total} exceeds the cap {MAX_TOTAL_DIMENSION}"
            )
        if (self.eq_lhs is None) != (self.eq_rhs is None):
            raise SdpError("equality sides must be given together")
        if self.eq_lhs is not None and self.eq_lhs.shape[1] != k:
            raise SdpError("equality matrix width disagrees with the variable count")


@dataclass(frozen=True)
class Certificate:
    kind: str  # "infeasibility_ray" | "improving_ray" | "inconsistent_equalities"
    residual: float
    margin: float
    blocks: Optional[tuple[np.ndarray, ...]] = None
    ray: Optional[np.ndarray] = None
    vector: Optional[np.ndarray] = None


@dataclass
class SdpSolution:
    z: np.ndarray
    objective: float
    status: SolverStatus
    duality_gap: float
    min_block_eigenvalue: float
    certificate: Optional[Certificate] = None
    iterations: int = 0
    trace: list[dict] = field(default_factory=list)


# -- reductions ------------------------------------------------------------------


@dataclass
class _Reduction:
    """Accumulated affine map z = z0 + N u plus the surviving block indices."""

    z0: np.ndarray
    basis: np.ndarray
    kept_blocks: list[int]


def _nullspace_solve(
    lhs: np.ndarray, rhs: np.ndarray, tol: float = 1e-11
) -> tuple[Optional[np.ndarray], Optional[np.ndarray], Optional[np.ndarray]]:
    """Particular solution and nullspace basis of lhs x = rhs, or an
    inconsistency witness (None, None, w) with w^T lhs ~ 0, w^T rhs != 0."""
    p, k = lhs.shape
    u, s, vt = np.linalg.svd(lhs, full_matrices=True)
    smax = s[0] if len(s) else 0.0
    rank = int(np.sum(s > tol * max(1.0, smax)))
    coeff = u.T @ rhs
    x0 = vt[:rank].T @ (coeff[:rank] / s[:rank]) if rank else np.zeros(k)
    resid = lhs @ x0 - rhs
    if np.linalg.norm(resid) > 1e-9 * (1.0 + np.linalg.norm(rhs)):
        scores = np.abs(coeff[rank:]) if p > rank else np.array([])
        if len(scores):
            w = u[:, rank + int(np.argmax(scores))]
        else:
            w = resid / np.linalg.norm(resid)
        return None, None, w
    basis = vt[rank:].T if rank < k else np.zeros((k, 0))
    return x0, basis, None


def _apply_affine(problem: LmiProblem, z0: np.ndarray, basis: np.ndarray) -> LmiProblem:
    blocks = []
    for b in problem.blocks:
        const = b.const + np.tensordot(z0, b.coeffs, axes=(0, 0))
        coeffs = np.tensordot(basis.T, b.coeffs, axes=(1, 0))
        blocks.append(Block(const, coeffs))
    return LmiProblem(basis.shape[1], basis.T @ problem.objective, blocks)


def _facial_equalities(problem: LmiProblem) -> tuple[np.ndarray, np.ndarray]:
    """Rows implied by structurally zero diagonal entries.

    If a block's (i, i) entry is identically zero then feasibility forces the
    whole row i to vanish, which is linear in the variables.  The assembly
    produces exact float zeros, so the detection threshold is tight.
    """
    rows, rhs = [], []
    for b in problem.blocks:
        n = b.size
        for i in range(n):
            if abs(b.const[i, i]) <= 1e-12 and np.all(
                np.abs(b.coeffs[:, i, i]) <= 1e-12
            ):
                for j in range(n):
                    if j == i:
                        continue
                    row = b.coeffs[:, i, j]
                    if np.all(np.abs(row) <= 1e-14) and abs(b.const[i, j]) <= 1e-14:
                        continue
                    rows.append(row.copy())
                    rhs.append(-b.const[i, j])
    if not rows:
        return np.zeros((0, problem.num_vars)), np.zeros(0)
    return np.vstack(rows), np.array(rhs)


def _presolve(
    problem: LmiProblem, config: SolverConfig
) -> tuple[Optional[LmiProblem], _Reduction, Optional[SdpSolution]]:
    """Eliminate equalities, run facial-reduction rounds, drop unconstrained
    variables and constant blocks.  May settle the problem outright."""
    k = problem.num_vars
    z0 = np.zeros(k)
    basis = np.eye(k)
    reduced = LmiProblem(
        k, problem.objective.copy(), [Block(b.const.copy(), b.coeffs.copy()) for b in problem.blocks]
    )

    pending_lhs = problem.eq_lhs
    pending_rhs = problem.eq_rhs
    for _ in range(16):
        if pending_lhs is not None and pending_lhs.shape[0] > 0:
            x0, nbasis, witness = _nullspace_solve(pending_lhs, pending_rhs)
            if witness is not None:
                # w certifies that the affine constraints are inconsistent
                w_orig = witness
                cert = Certificate(
                    "inconsistent_equalities",
                    residual=float(np.linalg.norm(pending_lhs.T @ witness)),
                    margin=float(abs(witness @ pending_rhs)),
                    vector=w_orig,
                )
                sol = SdpSolution(
                    z=z0.copy(),
                    objective=float("nan"),
                    status=SolverStatus.INFEASIBLE,
                    duality_gap=float("nan"),
                    min_block_eigenvalue=float("nan"),
                    certificate=cert,
                )
                return None, _Reduction(z0, basis, list(range(len(problem.blocks)))), sol
            z0 = z0 + basis @ x0
            basis = basis @ nbasis
            reduced = _apply_affine(problem, z0, basis)
        lhs, rhs = _facial_equalities(reduced)
        if lhs.shape[0] == 0:
            break
        pending_lhs, pending_rhs = lhs, rhs

    # a block no variable touches is a feasibility fact on its own; check
    # those before declaring anything unbounded
    for idx, b in enumerate(reduced.blocks):
        if reduced.num_vars and np.abs(b.coeffs).max() > 1e-13:
            continue
        eigvals, eigvecs = np.linalg.eigh(b.const)
        if eigvals[0] < -config.psd_tolerance:
            v = eigvecs[:, 0]
            x_blocks = [np.zeros((bb.size, bb.size)) for bb in problem.blocks]
            x_blocks[idx] = np.outer(v, v)
            cert = _make_ray_certificate(problem, x_blocks, z0, basis)
            sol = SdpSolution(
                z=z0.copy(),
                objective=float("nan"),
                status=SolverStatus.INFEASIBLE,
                duality_gap=float("nan"),
                min_block_eigenvalue=float(eigvals[0]),
                certificate=cert,
            )
            return None, _Reduction(z0, basis, []), sol

    # unconstrained variables: either an improving ray or pinned to zero
    if reduced.num_vars:
        active = np.zeros(reduced.num_vars, dtype=bool)
        for b in reduced.blocks:
            active |= np.abs(b.coeffs).reshape(reduced.num_vars, -1).max(axis=1) > 1e-13
        loose = ~active
        if np.any(loose):
            c_loose = reduced.objective[loose]
            if np.any(np.abs(c_loose) > 1e-11):
                j = int(np.argmax(np.abs(reduced.objective) * loose))
                ray = basis[:, j] * np.sign(reduced.objective[j])
                cert = Certificate(
                    "improving_ray",
                    residual=0.0,
                    margin=float(abs(reduced.objective[j])),
                    ray=ray,
                )
                sol = SdpSolution(
                    z=z0.copy(),
                    objective=float("inf"),
                    status=SolverStatus.UNBOUNDED,
                    duality_gap=float("nan"),
                    min_block_eigenvalue=float("nan"),
                    certificate=cert,
                )
                return None, _Reduction(z0, basis, list(range(len(problem.blocks)))), sol
            keep = np.where(active)[0]
            basis = basis[:, keep]
            reduced = _apply_affine(problem, z0, basis)

    # constant blocks are either vacuous or a ready-made Farkas certificate
    kept: list[int] = []
    for idx, b in enumerate(reduced.blocks):
        if reduced.num_vars and np.abs(b.coeffs).max() > 1e-13:
            kept.append(idx)
            continue
        eigvals, eigvecs = np.linalg.eigh(b.const)
        if eigvals[0] < -config.psd_tolerance:
            v = eigvecs[:, 0]
            x_blocks = [np.zeros((bb.size, bb.size)) for bb in problem.blocks]
            x_blocks[idx] = np.outer(v, v)
            cert = _make_ray_certificate(problem, x_blocks, z0, basis)
            sol = SdpSolution(
                z=z0.copy(),
                objective=float("nan"),
                status=SolverStatus.INFEASIBLE,
                duality_gap=float("nan"),
                min_block_eigenvalue=float(eigvals[0]),
                certificate=cert,
            )
            return None, _Reduction(z0, basis, kept), sol
    reduction = _Reduction(z0, basis, kept)
    if not kept or reduced.num_vars == 0:
        # nothing left to optimize: z0 is the unique candidate
        z = z0
        mineig = _min_block_eigenvalue(problem, z)
        status = SolverStatus.OPTIMAL
        sol = SdpSolution(
            z=z,
            objective=float(problem.objective @ z),
            status=status,
            duality_gap=0.0,
            min_block_eigenvalue=mineig,
            certificate=None,
        )
        return None, reduction, sol
    trimmed = LmiProblem(
        reduced.num_vars,
        reduced.objective,
        [reduced.blocks[i] for i in kept],
    )
    return trimmed, reduction, None


def _min_block_eigenvalue(problem: LmiProblem, z: np.ndarray) -> float:
    vals = []
    for b in problem.blocks:
        vals.append(float(np.linalg.eigvalsh(b.evaluate(z))[0]))
    return min(vals) if vals else 0.0


# -- certificates ------------------------------------------------------------------


def _make_ray_certificate(
    problem: LmiProblem, x_blocks: list[np.ndarray], z0: np.ndarray, basis: np.ndarray
) -> Certificate:
    """Normalize and score a Farkas certificate X for LMI infeasibility.

    Validity: X >= 0, <A_j, X> lies in the row space of the equalities
    (basis^T v ~ 0), and <A0, X> + z0 . v < 0 strictly."""
    total = sum(float(np.trace(x)) for x in x_blocks)
    if total <= 0:
        return Certificate("infeasibility_ray", float("inf"), 0.0)
    xs = tuple(x / total for x in x_blocks)
    mineig = min(float(np.linalg.eigvalsh(x)[0]) for x in xs)
    v = np.array(
        [
            sum(float(np.sum(b.coeffs[j] * x)) for b, x in zip(problem.blocks, xs))
            for j in range(problem.num_vars)
        ]
    )
    lin = float(np.max(np.abs(basis.T @ v))) if basis.size else 0.0
    margin = -(sum(float(np.sum(b.const * x)) for b, x in zip(problem.blocks, xs)) + float(z0 @ v))
    residual = max(max(0.0, -mineig), lin)
    return Certificate("infeasibility_ray", residual, margin, blocks=xs)


def _make_improving_ray_certificate(
    problem: LmiProblem, ray: np.ndarray
) -> Certificate:
    scale = float(np.linalg.norm(ray))
    if scale == 0:
        return Certificate("improving_ray", float("inf"), 0.0)
    ray = ray / scale
    mineig = 0.0
    for b in problem.blocks:
        s = np.tensordot(ray, b.coeffs, axes=(0, 0))
        norm = max(1.0, float(np.linalg.norm(s, 2)))
        mineig = min(mineig, float(np.linalg.eigvalsh(s)[0]) / norm)
    lin = 0.0
    if problem.eq_lhs is not None and problem.eq_lhs.size:
        lin = float(np.max(np.abs(problem.eq_lhs @ ray)))
    margin = float(problem.objective @ ray)
    residual = max(max(0.0, -mineig), lin)
    return Certificate("improving_ray", residual, margin, ray=ray)


def certificate_is_valid(cert: Optional[Certificate], config: SolverConfig) -> bool:
    if cert is None:
        return False
    if cert.kind == "inconsistent_equalities":
        return cert.residual <= 1e-7 and cert.margin > 1e-9
    return (
        cert.residual <= config.cert_tolerance
        and cert.margin > max(100.0 * cert.residual, 1e-9)
    )


# -- the homogeneous self-dual interior-point core -----------------------------------


def _boundary_step(mat: np.ndarray, direction: np.ndarray, chol: np.ndarray) -> float:
    """Largest alpha with mat + alpha*direction psd, given mat = chol chol^T."""
    inv = np.linalg.inv(chol)
    q = inv @ direction @ inv.T
    lam = float(np.linalg.eigvalsh((q + q.T) / 2)[0])
    if lam >= -1e-14:
        return float("inf")
    return -1.0 / lam


def _lyapunov_diag(lam: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    denom = (lam[:, None] + lam[None, :]) / 2.0
    return rhs / denom


def _hsd_solve(problem: LmiProblem, config: SolverConfig) -> tuple[
    SolverStatus, np.ndarray, Optional[list[np.ndarray]], Optional[np.ndarray], dict
]:
    """Run the embedding; returns (status, z, X_blocks, ray, info).

    For OPTIMAL, z is the de-homogenized point.  For INFEASIBLE, X_blocks is
    the Farkas candidate.  For UNBOUNDED, ray is the improving direction.
    """
    blocks = problem.blocks
    b = problem.objective
    k = problem.num_vars
    sizes = [blk.size for blk in blocks]
    nu = sum(sizes)

    xs = [np.eye(n) for n in sizes]
    ss = [np.eye(n) for n in sizes]
    z = np.zeros(k)
    tau, kappa = 1.0, 1.0
    mu0 = (sum(np.trace(x @ s) for x, s in zip(xs, ss)) + tau * kappa) / (nu + 1)

    bnorm = 1.0 + float(np.linalg.norm(b))
    cnorm = 1.0 + max(float(np.linalg.norm(blk.const)) for blk in blocks)
    info: dict = {"iterations": 0, "trace": []}

    def operators(xs_, z_, tau_):
        r_p = np.array(
            [-sum(float(np.sum(blk.coeffs[j] * x)) for blk, x in zip(blocks, xs_)) for j in range(k)]
        ) - b * tau_
        r_d = [
            -np.tensordot(z_, blk.coeffs, axes=(0, 0)) + s - blk.const * tau_
            for blk, s in zip(blocks, ss)
        ]
        return r_p, r_d

    status = SolverStatus.MAX_ITERATIONS
    for it in range(config.max_iterations):
        info["iterations"] = it + 1
        mu = (sum(np.trace(x @ s) for x, s in zip(xs, ss)) + tau * kappa) / (nu + 1)

        r_p, r_d = operators(xs, z, tau)
        r_g = -sum(float(np.sum(blk.const * x)) for blk, x in zip(blocks, xs)) + float(
            b @ z
        ) - kappa

        pobj = sum(float(np.sum(blk.const * x)) for blk, x in zip(blocks, xs)) / tau
        dobj = float(b @ z) / tau
        rel_gap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        pres = float(np.linalg.norm(r_p)) / (tau * bnorm)
        dres = max(float(np.linalg.norm(rd)) for rd in r_d) / (tau * cnorm)
        if config.trace:
            info["trace"].append(
                {"iter": it, "mu": float(mu), "pobj": pobj, "dobj": dobj,
                 "gap": pobj - dobj, "pres": pres, "dres": dres, "tau": tau, "kappa": kappa}
            )

        converged = (
            pres <= config.feas_tolerance
            and dres <= config.feas_tolerance
            and rel_gap <= config.gap_tolerance
        )
        # asymptotic acceptance: the returned z is feasible to high accuracy
        # (dres) and the gap is closed; only the multiplier-side residual is
        # limited by conditioning, which does not affect bound validity
        stalled_ok = (
            it >= 30
            and mu <= 1e-10 * mu0
            and dres <= config.feas_tolerance
            and rel_gap <= config.gap_tolerance
            and pres <= 1e3 * config.feas_tolerance
        )
        if converged or stalled_ok:
            # hold out until the de-homogenized point meets the advertised
            # PSD residual, unless that takes unreasonably long
            candidate = z / tau
            mineig = min(
                float(np.linalg.eigvalsh(blk.evaluate(candidate))[0]) for blk in blocks
            )
            deferrals = info.setdefault("deferrals", 0)
            if mineig >= -config.psd_tolerance or deferrals >= 20:
                return (
                    SolverStatus.OPTIMAL,
                    candidate,
                    [x / tau for x in xs],
                    None,
                    {**info, "gap": pobj - dobj, "pobj": pobj, "dobj": dobj},
                )
            info["deferrals"] = deferrals + 1

        if tau <= 1e-10 * max(1.0, kappa) or (mu <= 1e-14 * mu0 and tau < 1e-7):
            if float(b @ z) > 0:
                return SolverStatus.UNBOUNDED, z, None, z.copy(), info
            if sum(float(np.sum(blk.const * x)) for blk, x in zip(blocks, xs)) < 0:
                return SolverStatus.INFEASIBLE, z, [x.copy() for x in xs], None, info
            return SolverStatus.NUMERICAL_FAILURE, z / max(tau, 1e-300), None, None, info

        # Nesterov-Todd scaling per block
        try:
            gs, lams = [], []
            for x, s in zip(xs, ss):
                lx = np.linalg.cholesky(x)
                rs = np.linalg.cholesky(s)
                _, sig, vt_ = np.linalg.svd(rs.T @ lx)
                g = lx @ vt_.T @ np.diag(1.0 / np.sqrt(sig))
                gs.append(g)
                lams.append(sig)
        except np.linalg.LinAlgError:
            return SolverStatus.NUMERICAL_FAILURE, z / max(tau, 1e-300), None, None, info

        ws = [g @ g.T for g in gs]

        # Schur complement M_jk = sum_l <A_j, W A_k W>
        waw = []
        for blk, w in zip(blocks, ws):
            waw.append(np.array([w @ blk.coeffs[j] @ w for j in range(k)]))
        m_mat = np.zeros((k, k))
        for blk, per in zip(blocks, waw):
            flat_a = blk.coeffs.reshape(k, -1)
            flat_p = per.reshape(k, -1)
            m_mat += flat_a @ flat_p.T
        m_mat = (m_mat + m_mat.T) / 2.0

        h_vec = -np.array(
            [
                sum(float(np.sum(blk.coeffs[j] * (w @ blk.const @ w))) for blk, w in zip(blocks, ws))
                for j in range(k)
            ]
        )
        e0 = sum(float(np.sum(blk.const * (w @ blk.const @ w))) for blk, w in zip(blocks, ws))

        try:
            m_chol = np.linalg.cholesky(m_mat + 1e-13 * np.trace(m_mat) / k * np.eye(k))
        except np.linalg.LinAlgError:
            try:
                m_chol = np.linalg.cholesky(m_mat + 1e-8 * np.trace(m_mat) / k * np.eye(k))
            except np.linalg.LinAlgError:
                return SolverStatus.NUMERICAL_FAILURE, z / max(tau, 1e-300), None, None, info

        def m_solve(rhs):
            y = np.linalg.solve(m_chol, rhs)
            out = np.linalg.solve(m_chol.T, y)
            # two rounds of iterative refinement: the Schur complement of
            # high-order moment problems is ill-conditioned
            for _ in range(2):
                resid = rhs - m_mat @ out
                y = np.linalg.solve(m_chol, resid)
                out = out + np.linalg.solve(m_chol.T, y)
            return out

        def newton(rc_blocks, r_tk):
            rlams = [
                _lyapunov_diag(lam, rc) for lam, rc in zip(lams, rc_blocks)
            ]
            g_rc = [g @ rl @ g.T for g, rl in zip(gs, rlams)]
            extra = [grc + w @ rd @ w for grc, w, rd in zip(g_rc, ws, r_d)]
            q_vec = -np.array(
                [
                    sum(float(np.sum(blk.coeffs[j] * ex)) for blk, ex in zip(blocks, extra))
                    for j in range(k)
                ]
            )
            g0 = sum(float(np.sum(blk.const * ex)) for blk, ex in zip(blocks, extra))
            u1 = m_solve(b + h_vec)
            u2 = m_solve(r_p + q_vec)
            denom = float((b - h_vec) @ u1) + e0 + kappa / tau
            numer = -r_g + g0 + r_tk / tau + float((b - h_vec) @ u2)
            dtau = numer / denom
            dz = dtau * u1 - u2
            # dS from the dual residual equation, then dX from the scaled
            # complementarity equation dX = G Rlam G^T - W dS W
            dss = [
                np.tensordot(dz, blk.coeffs, axes=(0, 0)) + blk.const * dtau - rd
                for blk, rd in zip(blocks, r_d)
            ]
            dxs = [grc - w @ ds @ w for grc, w, ds in zip(g_rc, ws, dss)]
            dkappa = (r_tk - kappa * dtau) / tau
            return dz, dtau, dxs, dss, dkappa

        # predictor (affine scaling) direction
        rc_aff = [-np.diag(lam**2) for lam in lams]
        dz_a, dtau_a, dxs_a, dss_a, dkappa_a = newton(rc_aff, -tau * kappa)

        chols_x = [np.linalg.cholesky(x) for x in xs]
        chols_s = [np.linalg.cholesky(s) for s in ss]
        alpha = 1.0
        for x, dx, cx in zip(xs, dxs_a, chols_x):
            alpha = min(alpha, _boundary_step(x, dx, cx))
        for s, ds, cs in zip(ss, dss_a, chols_s):
            alpha = min(alpha, _boundary_step(s, ds, cs))
        if dtau_a < 0:
            alpha = min(alpha, -tau / dtau_a)
        if dkappa_a < 0:
            alpha = min(alpha, -kappa / dkappa_a)
        alpha_aff = min(1.0, alpha)

        mu_aff = (
            sum(
                np.trace((x + alpha_aff * dx) @ (s + alpha_aff * ds))
                for x, dx, s, ds in zip(xs, dxs_a, ss, dss_a)
            )
            + (tau + alpha_aff * dtau_a) * (kappa + alpha_aff * dkappa_a)
        ) / (nu + 1)
        sigma = min(max((max(mu_aff, 0.0) / mu) ** 3, 1e-12), 1.0 - 1e-12)

        # corrector with the second-order terms in the scaled space
        rc_comb = []
        for g, lam, dx, ds in zip(gs, lams, dxs_a, dss_a):
            ginv = np.linalg.inv(g)
            dxh = ginv @ dx @ ginv.T
            dsh = g.T @ ds @ g
            cross = (dxh @ dsh + dsh @ dxh) / 2.0
            rc_comb.append(sigma * mu * np.eye(len(lam)) - np.diag(lam**2) - cross)
        r_tk = sigma * mu - tau * kappa - dtau_a * dkappa_a
        dz_c, dtau_c, dxs_c, dss_c, dkappa_c = newton(rc_comb, r_tk)

        alpha = 1.0 / config.step_fraction
        for x, dx, cx in zip(xs, dxs_c, chols_x):
            alpha = min(alpha, _boundary_step(x, dx, cx))
        for s, ds, cs in zip(ss, dss_c, chols_s):
            alpha = min(alpha, _boundary_step(s, ds, cs))
        if dtau_c < 0:
            alpha = min(alpha, -tau / dtau_c)
        if dkappa_c < 0:
            alpha = min(alpha, -kappa / dkappa_c)
        alpha = min(1.0, config.step_fraction * alpha)

        for attempt in range(60):
            xs_new = [x + alpha * dx for x, dx in zip(xs, dxs_c)]
            ss_new = [s + alpha * ds for s, ds in zip(ss, dss_c)]
            tau_new = tau + alpha * dtau_c
            kappa_new = kappa + alpha * dkappa_c
            try:
                for m in xs_new + ss_new:
                    np.linalg.cholesky((m + m.T) / 2.0)
                if tau_new <= 0 or kappa_new <= 0:
                    raise np.linalg.LinAlgError
                break
            except np.linalg.LinAlgError:
                alpha *= 0.8
        else:
            return SolverStatus.NUMERICAL_FAILURE, z / max(tau, 1e-300), None, None, info

        xs = [(m + m.T) / 2.0 for m in xs_new]
        ss = [(m + m.T) / 2.0 for m in ss_new]
        z = z + alpha * dz_c
        tau, kappa = tau_new, kappa_new

    return status, z / max(tau, 1e-300), None, None, info


# -- public solve -----------------------------------------------------------------


def solve_lmi(problem: LmiProblem, config: SolverConfig = SolverConfig()) -> SdpSolution:
    """Solve the LMI; statuses follow the embedding's three-way outcome and
    every asserted infeasibility or unboundedness carries a verified
    certificate."""
    problem.validate()
    reduced, reduction, early = _presolve(problem, config)
    if early is not None:
        if early.certificate is not None and not certificate_is_valid(
            early.certificate, config
        ):
            early.status = SolverStatus.NUMERICAL_FAILURE
        return early

    status, u, x_blocks, ray, info = _hsd_solve(reduced, config)

    if status is SolverStatus.OPTIMAL:
        z = reduction.z0 + reduction.basis @ u
        sol = SdpSolution(
            z=z,
            objective=float(problem.objective @ z),
            status=status,
            duality_gap=float(info.get("gap", float("nan"))),
            min_block_eigenvalue=_min_block_eigenvalue(problem, z),
            iterations=info["iterations"],
            trace=info.get("trace", []),
        )
        return sol

    if status is SolverStatus.INFEASIBLE and x_blocks is not None:
        full = [np.zeros((blk.size, blk.size)) for blk in problem.blocks]
        for pos, orig_idx in enumerate(reduction.kept_blocks):
            full[orig_idx] = x_blocks[pos]
        cert = _make_ray_certificate(problem, full, reduction.z0, reduction.basis)
        if certificate_is_valid(cert, config):
            return SdpSolution(
                z=reduction.z0,
                objective=float("nan"),
                status=SolverStatus.INFEASIBLE,
                duality_gap=float("nan"),
                min_block_eigenvalue=float("nan"),
                certificate=cert,
                iterations=info["iterations"],
                trace=info.get("trace", []),
            )
        status = SolverStatus.NUMERICAL_FAILURE

    if status is SolverStatus.UNBOUNDED and ray is not None:
        z_ray = reduction.basis @ ray
        cert = _make_improving_ray_certificate(problem, z_ray)
        if certificate_is_valid(cert, config):
            return SdpSolution(
                z=reduction.z0,
                objective=float("inf"),
                status=SolverStatus.UNBOUNDED,
                duality_gap=float("nan"),
                min_block_eigenvalue=float("nan"),
                certificate=cert,
                iterations=info["iterations"],
                trace=info.get("trace", []),
            )
        status = SolverStatus.NUMERICAL_FAILURE

    z = reduction.z0 + reduction.basis @ (
        u if u.shape == (reduction.basis.shape[1],) else np.zeros(reduction.basis.shape[1])
    )
    return SdpSolution(
        z=z,
        objective=float(problem.objective @ z),
        status=status,
        duality_gap=float("nan"),
        min_block_eigenvalue=_min_block_eigenvalue(problem, z),
        iterations=info["iterations"],
        trace=info.get("trace", []),
    )


def eliminate_equalities(problem: LmiProblem) -> tuple[LmiProblem, np.ndarray, np.ndarray]:
    """Replace B z = d by the affine parametrization z = z0 + N u.

    Returns the reduced equality-free problem plus (z0, N) for mapping points
    back; raises if the equalities are inconsistent."""
    problem.validate()
    if problem.eq_lhs is None or problem.eq_lhs.shape[0] == 0:
        return (
            LmiProblem(problem.num_vars, problem.objective.copy(), problem.blocks),
            np.zeros(problem.num_vars),
            np.eye(problem.num_vars),
        )
    x0, basis, witness = _nullspace_solve(problem.eq_lhs, problem.eq_rhs)
    if witness is not None:
        raise SdpError("equality constraints are inconsistent")
    return _apply_affine(problem, x0, basis), x0, basis


# -- SDPA sparse format ---------------------------------------------------------------


def _is_diagonal_block(block: Block) -> bool:
    off = ~np.eye(block.size, dtype=bool)
    if np.any(np.abs(block.const[off]) > 0):
        return False
    return not np.any(np.abs(block.coeffs[:, off]) > 0)


def export_sdpa(problem: LmiProblem) -> str:
    """SDPA sparse text (.dat-s) for the LMI.

    The objective line carries the maximize-convention vector c; the matno-0
    entries carry -A0 so the block constraint reads sum_j z_j F_j - F0 >= 0.
    Values print with 17 significant digits and entries are sorted by
    (matno, blkno, i, j) over the upper triangle.
    """
    problem.validate()
    if problem.eq_lhs is not None and problem.eq_lhs.shape[0] > 0:
        raise SdpError("export needs equality-free problems; eliminate them first")
    k = problem.num_vars
    lines = [str(k), str(len(problem.blocks))]
    sizes = []
    for blk in problem.blocks:
        sizes.append(-blk.size if _is_diagonal_block(blk) and blk.size > 1 else blk.size)
    lines.append(" ".join(str(s) for s in sizes))
    lines.append(" ".join(f"{v:.17g}" for v in problem.objective))
    entries = []
    for bi, blk in enumerate(problem.blocks, start=1):
        f0 = -blk.const
        for i in range(blk.size):
            for j in range(i, blk.size):
                if f0[i, j] != 0.0:
                    entries.append((0, bi, i + 1, j + 1, f0[i, j]))
        for m in range(k):
            mat = blk.coeffs[m]
            for i in range(blk.size):
                for j in range(i, blk.size):
                    if mat[i, j] != 0.0:
                        entries.append((m + 1, bi, i + 1, j + 1, mat[i, j]))
    entries.sort(key=lambda e: e[:4])
    for matno, blkno, i, j, val in entries:
        lines.append(f"{matno} {blkno} {i} {j} {val:.17g}")
    return "\n".join(lines) + "\n"


def parse_sdpa(text: str) -> LmiProblem:
    """Inverse of export_sdpa at the printed precision."""
    rows = []
    for raw in text.splitlines():
        stripped = raw.strip()
        if not stripped or stripped[0] in "\"*":
            continue
        rows.append(stripped)
    if len(rows) < 4:
        raise SdpError("truncated SDPA input")
    k = int(rows[0].split()[0])
    nblocks = int(rows[1].split()[0])
    size_tokens = rows[2].replace("{", " ").replace("}", " ").replace(",", " ").split()
    sizes = [abs(int(float(t))) for t in size_tokens[:nblocks]]
    obj = np.array([float(t) for t in rows[3].replace(",", " ").split()[:k]])
    blocks = [Block(np.zeros((n, n)), np.zeros((k, n, n))) for n in sizes]
    for line in rows[4:]:
        parts = line.split()
        if len(parts) != 5:
            raise SdpError(f"malformed entry line: {line!r}")
        matno, blkno, i, j = (int(float(p)) for p in parts[:4])
        val = float(parts[4])
        blk = blocks[blkno - 1]
        if matno == 0:
            blk.const[i - 1, j - 1] = -val
            blk.const[j - 1, i - 1] = -val
        else:
            blk.coeffs[matno - 1, i - 1, j - 1] = val
            blk.coeffs[matno - 1, j - 1, i - 1] = val
    return LmiProblem(k, obj, blocks)
