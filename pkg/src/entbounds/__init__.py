"""Minimum and maximum local energy of bipartite pure states at fixed
entanglement, the states that reach them, and numerical checks."""

__version__ = "0.1.0"

from .errors import (
    DegenerateRegime,
    EntanglementOutOfRange,
    EntBoundsError,
    InvalidParameter,
    InvalidSpectrum,
    InvalidState,
    SolverFailure,
)
from .spectra import (
    Alignment,
    JointLevels,
    LocalSpectrum,
    align_max,
    align_min,
    ground_degeneracy,
    make_spectrum,
    top_degeneracy,
)
from .states import (
    PureState,
    ReducedState,
    SchmidtVector,
    entanglement_entropy,
    local_energy,
    purity,
    reduced,
    schmidt,
)
from .thermal import (
    BoundCurve,
    BoundPoint,
    ThermalPoint,
    bound_curve,
    bound_energies,
    e_max,
    e_min,
    evaluate_thermal,
    max_state,
    min_state,
    solve_beta,
)
from .sampling import (
    Histogram2D,
    MixedEnsemble,
    ensemble_point,
    haar_mean_energy,
    haar_pure,
    page_entropy,
    random_ensemble,
    scan,
)
from .twoqubit import TwoQubitBounds, closed_bounds, entropy_from_purity, lambda_from_purity
