"""liemax: left-invariant Hamiltonian flows on matrix Lie groups,
exponential-map symmetries, and Maxwell times."""

from .algebra import (
    AlgebraVector,
    Covector,
    LieAlgebra,
    LinearMapOnAlgebra,
    MatrixRepresentation,
    OrbitReport,
    ad_star,
    bracket,
    classify_map,
    orbit_report,
)
from .catalog import (
    BUILTIN_NAMES,
    GroupBundle,
    SemidirectStructure,
    builtin,
    load_group,
    resolve,
    save_group,
    semidirect_S_inverse,
)
from .errors import (
    CatalogError,
    DimensionMismatchError,
    DomainError,
    GenericSetError,
    IntegrationError,
    LiemaxError,
    LogDomainError,
    RepresentationClosureError,
    ValidationError,
)
from .flows import (
    DEFAULT_CONFIG,
    FlowConfig,
    Trajectory,
    exp_map,
    left_flow,
    left_flow_dense,
    left_trajectory,
    right_flow,
    trajectory_to_csv,
    trajectory_to_json,
    vertical_field,
    vertical_flow,
)
from .groups import (
    Ad_star,
    CotangentPoint,
    GroupPoint,
    compare_cotangent,
    group_exp,
    group_log,
    identity,
    momentum_maps,
)
from .hamiltonians import (
    HamiltonianSpec,
    killing_form,
    killing_hamiltonian,
    make_hamiltonian,
    pullback_hamiltonian,
    sr_hamiltonian,
)
from .maxwell import (
    MaxwellQuery,
    MaxwellResult,
    distinctness,
    first_maxwell_time,
    fixed_point_residual,
    maxwell_meet_residual,
    se2_stratum_classify,
    sh2_stratum_classify,
)
from .symmetry import (
    RejectionReport,
    SymmetryCandidate,
    VerifiedSymmetry,
    apply_s,
    corollary2_check,
    group_S,
    proposition1_residual,
    sample_covectors,
    theorem_residual,
    verify_candidate,
)

__version__ = "0.1.0"
