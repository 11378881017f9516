"""Dynamic movement primitives for trajectories of SPD matrices."""
from .dmp_core import (
    BasisSet,
    CanonicalSystem,
    DmpGains,
    ScalarDmp,
    fit_weights,
    forcing_value,
    make_basis,
    phase,
    scalar_dmp_rollout,
    train_scalar,
)
from .errors import (
    AsymmetryError,
    DefinitenessError,
    DegenerateActivation,
    DimensionMismatch,
    InvalidDimension,
    InvalidParameter,
    RankDeficiency,
    SpdDmpError,
)
from .manifold import (
    exp_map,
    expm_sym,
    geodesic,
    log_map,
    logm_spd,
    mandel_mat,
    mandel_vec,
    parallel_transport,
    spd_inv_sqrt,
    spd_sqrt,
)
from .metrics import jbld_dist, log_euclidean_dist
from .msd import MsdScenario, gen_stiffness_demo, simulate_msd
from .spd_dmp import (
    GoalSwitch,
    ReproductionState,
    SpdDemonstration,
    SpdDmpModel,
    Trajectory,
    compute_forcing_targets,
    preprocess,
    reproduce,
    step,
    train,
)

__version__ = "0.1.0"
