"""Exact classification of weighted projective hypersurfaces.

Modules:

``exactmath``      Sylvester numbers, semigroup membership, double exponential bounds
``singularities``  cyclic quotient singularities and the Reid-Tai criterion
``geometry``       well-formedness, quasi-smoothness, strata, classification reports
``families``       the eight Sylvester constructions and sporadic examples
``search``         exhaustive search over Calabi-Yau surfaces
``cli``            the ``wphyper`` command
"""

from .exactmath import (
    BudgetExceeded,
    approx,
    exceeds_double_exponential,
    semigroup_member,
    sylvester,
)
from .families import (
    FamilyMember,
    ProblemId,
    adjunction_degree,
    generate,
    kollar_pair_volume,
    product_with_curve,
    sporadic_catalog,
)
from .geometry import (
    ClassificationReport,
    Hypersurface,
    WeightSystem,
    classify_hypersurface,
    first_nonvanishing,
    hyp_volume,
    quasi_smooth_general,
    section_count,
    strata,
)
from .search import RecordKind, SearchConfig, enumerate_cy_surfaces
from .singularities import (
    QuotientSingularity,
    SingularityClass,
    SingularityVerdict,
    classify,
    normalize,
    reid_tai_direct,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ClassificationReport",
    "FamilyMember",
    "Hypersurface",
    "ProblemId",
    "QuotientSingularity",
    "RecordKind",
    "SearchConfig",
    "SingularityClass",
    "SingularityVerdict",
    "WeightSystem",
    "adjunction_degree",
    "approx",
    "classify",
    "classify_hypersurface",
    "enumerate_cy_surfaces",
    "exceeds_double_exponential",
    "first_nonvanishing",
    "generate",
    "hyp_volume",
    "kollar_pair_volume",
    "normalize",
    "product_with_curve",
    "quasi_smooth_general",
    "reid_tai_direct",
    "section_count",
    "semigroup_member",
    "sporadic_catalog",
    "strata",
    "sylvester",
]
