"""surfrank: rank statistics for elliptic surfaces.

Exact arithmetic over F_l and F_{l^k}, Frobenius traces by character sums and
baby-step giant-step, L-polynomials of surfaces over F_l(T) with exact
analytic ranks, Nagao-style rank estimators over Q, family enumeration by
height or Mahler measure, the random-trace model with its trajectory
simulations, and the experiment harness tying them together.
"""

from .errors import (
    BadSurfaceReductionError,
    BudgetExceededError,
    CheckpointError,
    InconsistentDataError,
    InvalidDegreeError,
    InvalidTraceError,
    IsotrivialSurfaceError,
    SearchTooLargeError,
    SurfrankError,
    UnsupportedError,
)
from .ffield import CharTable, ExtField, PrimeField, char_table, legendre_chi, make_extension
from .traces import TraceResult, trace_bsgs, trace_naive, trace_power, trace_row
from .surfaces import (
    ConductorSummary,
    PlaceReport,
    SurfaceFq,
    SurfaceQ,
    classify_places,
    discriminant_poly,
    format_surface_text,
    is_isotrivial,
    parse_surface_text,
    reduce_mod,
)
from .lfunction import (
    LPolynomial,
    RankReport,
    analytic_rank,
    find_sections,
    functional_equation_check,
    newton_lpoly,
    power_sums,
    surface_lpolynomial,
)
from .nagao import (
    CurveQ,
    NagaoEstimate,
    bsd_partial_product,
    heathbrown_sum,
    nagao_rank_estimate,
    nagao_sum,
    rubinstein_estimate,
)
from .families import (
    FamilySpec,
    enumerate_family,
    enumerate_Pd,
    filter_SN,
    mahler_measure,
    sample_family,
)
from .birch import (
    BirchModel,
    TrajectoryResult,
    birch_model,
    birch_moment,
    birch_sample,
    fixed_t_series,
    three_series_sim,
)
from .experiments import (
    AvgRankReport,
    CrtReport,
    RhoEstimate,
    avg_rank_survey,
    crt_experiment,
    rho_estimate,
    rho_sweep,
)

__version__ = "0.1.0"
