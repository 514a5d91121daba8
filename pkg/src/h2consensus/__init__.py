"""H2 performance analysis and time-scale design for multi-time-scale consensus networks."""

from .errors import H2ConsensusError, NumericError, ValidationError
from .graph import (
    CutBasis,
    EdgeOrdering,
    Graph,
    IncidenceDecomposition,
    build_graph,
    cut_basis,
    degrees,
    incidence,
    spanning_tree,
    spanning_tree_from,
)
from .operators import (
    EdgeSystem,
    Mode,
    NoiseModel,
    ScaleWeightPair,
    SimilarityPair,
    edge_system,
    scaled_edge_laplacian,
    similarity_transform,
    weighted_laplacian,
)
from .h2 import (
    H2Report,
    closed_form_gramian,
    cycle_contributions,
    h2_norm,
    h2_norm_squared,
    h2_report,
    k_ratio,
    separated_h2,
    solve_lyapunov,
    tree_h2_closed_form,
)
from .bounds import (
    BoundReport,
    covariance_h2_bounds,
    gramian_trace_bounds,
    observability_gramian,
    rayleigh_product_bounds,
)
from .design import (
    DesignSolution,
    P1Config,
    P2Config,
    Tag,
    p1_cost_coefficients,
    p1_solve,
    p1_solve_reference,
    p2_objective,
    p2_solve,
)
from .network import Network, Realization
from .sim import SimConfig, SimResult, estimate_h2, simulate_edge_system, simulate_node_system

__version__ = "0.1.0"
FORMAT_VERSION = 1
