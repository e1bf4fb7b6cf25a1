"""Harder-Narasimhan filtrations, maximal weights and optimal destabilizing
directions for split bundles and holomorphic pairs on the projective line,
computed in exact rational arithmetic."""

from .core import (
    VOLUME,
    Flag,
    PairModel,
    Rat,
    SlopePoint,
    Spectrum,
    SplitBundle,
    as_rat,
    flag_from_quotients,
    quotient_data,
    slope,
    topsum,
)
from .hn import (
    EnergyComparison,
    NotComparableError,
    Polygon,
    compare_concave_energy,
    dominates,
    energy,
    hn_filtration,
    is_concave,
    is_semistable,
    normalize_flag,
    polygon_of,
)
from .pairs import (
    GeneralizedHN,
    ModelAssumptionError,
    PairDestabilizer,
    TauSemistableError,
    generalized_hn,
    is_tau_semistable,
    pair_limit_object,
    pair_maximal_weight,
    pair_optimal_destabilizer,
    techlem_compare,
)
from .weight import (
    Destabilizer,
    flow_decay_exponents,
    lagrange_minimum,
    limit_object,
    maximal_weight,
    optimal_destabilizer,
)

__version__ = "0.1.0"
