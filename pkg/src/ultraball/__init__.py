"""Exact balleans of finite and symbolic ultrametric spaces.

The package builds the space of closed balls of an ultrametric space,
computes Hausdorff distances between balls by independent exact routes,
represents finite spaces as merge trees with canonical codes, models
infinite max-metric subsets of the rationals symbolically, and ships a
seeded randomized suite that machine-checks the structure theorems tying
a space to its ballean.
"""

from .ballean import (
    BallFamily,
    Ballean,
    b0_set,
    ballean_space,
    enumerate_ballean,
    family_diameters,
    hausdorff_balls,
    hausdorff_by_cases,
    hausdorff_oracle,
    iso_of_ballean,
    iterate_ballean,
    min_positive_distance,
    singleton_embedding,
    smallest_ball_distance,
)
from .core import (
    Ball,
    BallRelation,
    FiniteUltrametricSpace,
    PointId,
    UltraballError,
    UltrametricViolation,
    ball_relation,
    closed_ball,
    diam,
    equidistant_space,
    find_violation,
    parse_rational,
    smallest_ball,
    space_from_json_dict,
    space_to_json_dict,
    validate_ultrametric,
)
from .dendrogram import (
    Dendrogram,
    are_isometric,
    build_dendrogram,
    canonical_code,
    dendrogram_to_space,
    format_dendrogram,
    random_binary_space,
    random_space,
)
from .dlps import (
    DlpsSpace,
    Singleton,
    Truncation,
    dlps_acc,
    dlps_ball,
    dlps_ballean_analysis,
    dlps_distance,
    dlps_hausdorff,
    dlps_is_boundedly_compact,
    dlps_is_discrete,
    dlps_is_locally_finite,
    dlps_is_metrically_discrete,
    dlps_iso,
    dlps_sample,
    dlps_space,
)
from .harness import CheckReport, TrialConfig, probe_q63, run_suite

__all__ = [
    "Ball",
    "BallFamily",
    "BallRelation",
    "Ballean",
    "CheckReport",
    "Dendrogram",
    "DlpsSpace",
    "FiniteUltrametricSpace",
    "PointId",
    "Singleton",
    "TrialConfig",
    "Truncation",
    "UltraballError",
    "UltrametricViolation",
    "are_isometric",
    "b0_set",
    "ball_relation",
    "ballean_space",
    "build_dendrogram",
    "canonical_code",
    "closed_ball",
    "dendrogram_to_space",
    "diam",
    "dlps_acc",
    "dlps_ball",
    "dlps_ballean_analysis",
    "dlps_distance",
    "dlps_hausdorff",
    "dlps_is_boundedly_compact",
    "dlps_is_discrete",
    "dlps_is_locally_finite",
    "dlps_is_metrically_discrete",
    "dlps_iso",
    "dlps_sample",
    "dlps_space",
    "enumerate_ballean",
    "equidistant_space",
    "family_diameters",
    "find_violation",
    "format_dendrogram",
    "hausdorff_balls",
    "hausdorff_by_cases",
    "hausdorff_oracle",
    "iso_of_ballean",
    "iterate_ballean",
    "min_positive_distance",
    "parse_rational",
    "probe_q63",
    "random_binary_space",
    "random_space",
    "run_suite",
    "singleton_embedding",
    "smallest_ball",
    "smallest_ball_distance",
    "space_from_json_dict",
    "space_to_json_dict",
    "validate_ultrametric",
]
