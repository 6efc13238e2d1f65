"""fareylab: exact Farey-fraction index algebra, identity verification,
transfer-map geometry, and limiting averages."""

from .continuants import (
    SignedContinuantForm,
    continuant_eval,
    continuant_monomials,
    fibonacci,
    kronecker2,
    nu_k_from_nu2,
)
from .constants import (
    BkInterval,
    ah_empirical,
    b3_cross_check,
    bk_empirical,
    bk_enclosure,
    bk_star_form,
    bk_trivial_ceiling,
    calibrate_error_constant,
    convergence_report,
    nu_k_distribution,
)
from .farey import (
    ContractViolation,
    FareyContext,
    FareyFraction,
    FareyWindow,
    correlation_sum,
    count_farey,
    farey_context,
    farey_next,
    farey_stream,
    farey_window,
    neighbor_criterion,
    nu2_floor,
    nu_k,
    seek,
    sum_nu_k,
    windows,
)
from .identities import (
    VerificationReport,
    verify_division_form,
    verify_hall_shiu,
    verify_index_formulas,
    verify_sl2_lemma,
    verify_suite,
    verify_theorem_identity,
    verify_three_term,
)
from .triangle import (
    ConvexPolygon,
    CylinderCell,
    Point,
    Rat,
    UnimodularMap,
    area,
    branch_index,
    branch_matrix,
    branch_region,
    clip,
    enumerate_cells,
    farey_triangle,
    in_triangle,
    itinerary,
    load_cells,
    map_polygon,
    save_cells,
    tail_region,
    transfer,
    visible_count,
)

__version__ = "0.1.0"
