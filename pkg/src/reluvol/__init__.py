"""reluvol: exact lattice-polytope volumes, sum-union closures, and depth
lower bounds for ReLU networks with fractional weights."""

from .bounds import (
    DepthBoundReport,
    GrowthRow,
    ObstructionCertificate,
    RefutationReport,
    ceil_log,
    gradual_growth_table,
    lower_bound_nary,
    refute_network_claim,
    volume_obstruction_check,
)
from .certificates import Certificate
from .exact_arith import (
    NaryFraction,
    Residue,
    common_denominator,
    mod_reduce,
    nary_parse,
    smallest_prime_not_dividing,
)
from .network import (
    Layer,
    PolytopePair,
    ReluNetwork,
    RING_Q,
    RING_Z,
    WeightRing,
    clear_denominators,
    compile_to_polytopes,
    evaluate_network,
    functions_equal,
    is_homogeneous,
    max_network,
    nary_ring,
    network_from_json_dict,
    network_to_json_dict,
    represents_scaled_simplex,
)
from .polytope import (
    LatticeChart,
    LatticePolytope,
    conv_union,
    contains_point,
    dilate,
    equal,
    faces_of_dim,
    hull,
    lattice_chart,
    lattice_points_count,
    minkowski_sum,
    polytope_from_json_dict,
    polytope_to_json_dict,
    standard_simplex,
    support_witness,
)
from .su import (
    ConvUnionExpr,
    InvariantReport,
    PointExpr,
    SUExpression,
    SumExpr,
    face_expr,
    membership_as_sum_certificate,
    p_invariant_check,
    random_su,
    su_from_json_dict,
    su_to_json_dict,
)
from .su import evaluate as evaluate_expression
from .volume import (
    BinomialExpansion,
    binomial_expansion_check,
    face_volume_propagation_check,
    join_divisibility_check,
    mixed_volume,
    modular_additivity_check,
    normalized_volume,
    normalized_volume_counting_oracle,
)

__version__ = "0.1.0"
