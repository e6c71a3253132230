"""Plane-wave solutions of the Yajima-Oikawa system and the closed
transverse curves they generate in the 3-sphere."""

from .closure import (
    ClosureSolution,
    InadmissibleK,
    WaveSpectrum,
    admissible_k_ranges,
    closure_from_pq,
    closure_residual,
    cubic_roots,
    nu_of_mu,
    wave_spectrum,
)
from .curves import (
    CurveSet,
    LinkingNumber,
    companion_curve,
    contact_planes,
    curve_from_solution,
    export,
    import_curveset,
    linking_number,
    project_to_s3,
    stereographic,
    transversality_profile,
)
from .framegen import (
    FrameField,
    build_rpe,
    fundamental_matrix,
    integrate_frame,
    local_frame_from_natural,
    natural_frame,
    natural_frame_field,
)
from .herm3 import (
    FORM_GRAM,
    change_of_frame,
    frame_report,
    herm,
    is_null,
    is_su21,
)
from .hierarchy import (
    FieldCoefficients,
    InvariantGrid,
    apply_hamiltonian_p,
    apply_hamiltonian_q,
    density,
    flow_consistency,
    hierarchy_field,
    identity_sums,
)
from .yo_core import (
    GridFunction,
    PlaneWave,
    check_lax_gauge_equivalence,
    lax_u,
    lax_v,
    plane_wave_eval,
    yo_residual,
    zero_curvature_residual,
    zero_curvature_residual_grid,
)

__version__ = "0.1.0"

__all__ = [
    "ClosureSolution", "CurveSet", "FieldCoefficients", "FrameField",
    "FORM_GRAM", "GridFunction", "InadmissibleK", "InvariantGrid",
    "LinkingNumber", "PlaneWave", "WaveSpectrum",
    "admissible_k_ranges", "apply_hamiltonian_p", "apply_hamiltonian_q",
    "build_rpe", "change_of_frame", "check_lax_gauge_equivalence",
    "closure_from_pq", "closure_residual", "companion_curve",
    "contact_planes", "cubic_roots", "curve_from_solution", "density",
    "export", "flow_consistency", "frame_report", "fundamental_matrix",
    "herm", "hierarchy_field", "identity_sums", "import_curveset",
    "integrate_frame", "is_null", "is_su21", "lax_u", "lax_v",
    "linking_number", "local_frame_from_natural", "natural_frame",
    "natural_frame_field", "nu_of_mu", "plane_wave_eval", "project_to_s3",
    "stereographic", "transversality_profile", "wave_spectrum",
    "yo_residual", "zero_curvature_residual", "zero_curvature_residual_grid",
]
