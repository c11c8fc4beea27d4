"""Information-theoretic noise and disturbance for successive projective
qubit measurements.

The library computes the conditional-entropy noise N = H(A|M) and
disturbance D = H(B|B') of a sharp spin measurement, exactly and from
simulated counting data, applies outcome-conditioned correction operations,
and verifies the general bound N + D >= c_AB together with the tight qubit
tradeoff g[N]^2 + g[D]^2 <= 1 and its saturating boundary.
"""

__version__ = "0.1.0"

from .bloch import (
    OUTCOMES,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    BlochVector,
    CorrectionMap,
    Observable,
    ProjectiveInstrument,
    PureState,
    apply_instrument,
    born_probability,
    eigenstates,
    polar_observable,
)
from .bounds import (
    BoundaryCurve,
    BoundarySolverState,
    BoundReport,
    EnsembleMember,
    GridSearchResult,
    MaassenUffinkReport,
    OracleReport,
    boundary_curve,
    boundary_disturbance,
    boundary_to_csv,
    c_ab,
    check_bounds,
    correction_grid_search,
    disturbance_surface,
    ensemble_boundary_oracle,
    ensemble_point,
    maassen_uffink_compare,
    optimal_correction,
    pure_state_projection,
    signed_boundary_distance,
    surface_to_csv,
    variational_f,
    variational_solver_state,
)
from .counting import (
    EstimatedProbabilities,
    IntensityTable,
    bayes_invert,
    estimate_probabilities,
    nd_from_counts,
    polar_angle,
    simulate_intensities,
)
from .entropy import (
    JointTable,
    NDPoint,
    binary_entropy,
    binary_entropy_derivative,
    binary_entropy_inverse,
    conditional_entropy,
    disturbance,
    noise,
    sequential_joint,
    theory_disturbance_optimal,
    theory_disturbance_uncorrected,
    theory_noise,
)
from .errors import DomainError, EstimationError, NoiseDistError, ValidationError
