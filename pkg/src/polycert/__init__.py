"""Compactness certificates and SOS/moment relaxations for polynomial optimization."""

from polycert.polynomial import (
    ParseError,
    Polynomial,
    PolynomialError,
    PolynomialSystem,
    differentiate,
    evaluate,
    format_polynomial,
    parse_polynomial,
    support,
)
from polycert.polytope import (
    FaceData,
    GlobalNewtonPolytope,
    LocalNewtonPolytope,
    PolytopeError,
    coordinate_image,
    face_support,
    g_transform_data,
    global_newton_polytope,
    local_newton_polytope,
)
from polycert.nondegen import (
    CompactnessCertificate,
    CompactnessConclusion,
    CompactnessRoute,
    NondegeneracyVerdict,
    SearchConfig,
    VerdictStatus,
    compactness_certificate,
    coordinate_restriction,
    khovanskii_nondegenerate,
    nondegenerate_at_infinity,
    principal_part_global,
    principal_part_local,
    strongly_g_adapted,
)
from polycert.morse import (
    CriticalPoint,
    MorseConfig,
    MorseReport,
    MorseVerdict,
    PointKind,
    critical_points,
    morse_verdict,
    zeros_on_set,
)
from polycert.relax import (
    ExtractionResult,
    KktSystem,
    MomentBasis,
    MomentMatrixSpec,
    ProbeOutcome,
    ProbeResult,
    RelaxError,
    RelaxationProblem,
    RelaxationResult,
    extract_minimizer,
    gradient_relaxation,
    gradient_sos_lmi,
    kkt_relaxation,
    kkt_system,
    lasserre_relaxation,
    localizing_matrix,
    membership_probe,
    moment_basis,
    moment_matrix,
    moment_matrix_spec,
    point_moment_vector,
    relaxation_ladder,
    relaxation_to_lmi,
    solve_relaxation,
)
from polycert.sdp import (
    Block,
    Certificate,
    LmiProblem,
    SdpError,
    SdpSolution,
    SolverConfig,
    SolverStatus,
    eliminate_equalities,
    export_sdpa,
    parse_sdpa,
    solve_lmi,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
