"""Fixed points and the two linearizations of discrete-time RNN dynamics.

The same network update x^{k+1} = W g(x^k) + u^k can be linearized around a
fixed point in activation coordinates (dynamics matrix W D) or in activity
coordinates (dynamics matrix D W), where D is the diagonal matrix of unit
gains g'(x0). This package builds both systems, simulates them, certifies
that they describe the same trajectories through the map r = D x, verifies
the left/right eigenvector correspondence between W D and D W, and exposes
the context-dependent input modulation that is visible only in activity
space.
"""

from .context import (
    Context,
    ContextComparison,
    ContextInstantiation,
    ContextSweep,
    angle_between_deg,
    compare_contexts,
    compare_instantiations,
    context_sweep,
    instantiate_context,
)
from .dynamics import ACTIVATION, ACTIVITY, InputSequence, RnnModel, Trajectory, simulate, step
from .errors import (
    ConfigError,
    DivergenceError,
    EigensolverError,
    InverseRangeError,
    NearZeroGainError,
    NonConvergenceError,
    NonFiniteError,
    RnnLinzError,
    ShapeMismatchError,
    SingularJacobianError,
    ZeroProbeError,
)
from .fixed_points import FixedPoint, find_fixed_point, residual_norm, verify_fixed_point
from .linearize import (
    EquivalenceReport,
    GainMatrix,
    LinearizedSystem,
    check_equivalence,
    gain_matrix,
    linearization_error,
    linearize_activation,
    linearize_activity,
    map_r_to_x,
    map_x_to_r,
    simulate_linear,
)
from .model_io import load_config, load_model, save_model
from .nonlinearity import IDENTITY, LOGISTIC, TANH, Nonlinearity, apply, derivative, inverse
from .spectral import (
    CorrespondenceReport,
    DotPreservationReport,
    EigenTriple,
    SpectrumPairing,
    correspondence_report,
    eigendecompose,
    left_residual,
    map_left_eigvec,
    map_right_eigvec,
    right_residual,
    verify_dot_preservation,
    verify_spectrum_identity,
)

__version__ = "0.1.0"
