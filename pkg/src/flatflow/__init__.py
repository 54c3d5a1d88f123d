"""flatflow: spectral flow, rho and Chern-Simons invariants of flat SU(2)
representations of 3-manifold fundamental groups."""

from .quaternions import (
    ExactCircleElement,
    Quaternion,
    UnitQuaternion,
    ad,
    quat_mul,
    rationalize,
    trace_ad_minus_3,
)
from .words import (
    GroupPresentation,
    GroupRingElement,
    Word,
    abelianized_boundary,
    fox_derivative,
    parse_word,
)
from .reps import (
    RepClass,
    Representation,
    RepresentationPath,
    classify,
    evaluate_word,
    solve_conjugator,
    validate,
)
from .cohomology import (
    CocycleSystem,
    CohomologySummary,
    PathCertificate,
    build_cocycle_system,
    cohomology_summary,
    dim_z1,
    path_certificate,
    restriction_cokernel,
)
from .signatures import (
    FixedSurface,
    HermitianForm,
    IsolatedFixedPoint,
    SeifertMatrix,
    SymmetricForm,
    average_signature,
    cg_eigenspace_form,
    eigenspace_signature_from_cover,
    g_signature_from_seifert,
    hermitian_inertia,
    hermitian_signature,
    local_g_signature,
    restrict_form,
    signature,
    signature_defect,
    solve_boundary_class,
)
from .rho import (
    CobordismStep,
    CoverData,
    RhoValue,
    cobordism_step,
    connected_sum_rho,
    rho_chain,
    rho_finite_image,
    rho_finite_image_by_order,
    rho_lens_space,
)
from .chern_simons import (
    BoundaryPath,
    CSValue,
    PiecewisePoly,
    RationalPoly,
    cs_lift,
    kirk_klassen_cs,
    longitude_path,
)
from .spectral_flow import SpectralFlowInput, SpectralFlowResult, spectral_flow
from .plan import ComputationPlan, parse_plan
from .runner import Report, emit_report, parse_report, run_plan

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
