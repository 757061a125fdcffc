"""Exact combinatorics of Newton polygon strata.

Newton polygon algebra and the slope partial order, central/isogeny-leaf
dimension formulas, truncated module linear algebra over Z/p^a, elementary
sequences of self-dual p-torsion modules, and quasi-polarization normal
forms with their isogeny-move graph.
"""

from .errors import (
    BoundError,
    BoundExceeded,
    InputError,
    InternalCheckError,
    NewtonStrataError,
    NotSymmetric,
    SearchDepthExceeded,
)
from .newton import (
    NewtonPolygon,
    SlopePair,
    enumerate_polygons,
    enumerate_symmetric,
    from_pairs,
    from_slopes,
    hasse_diagram,
    ordinary,
    parse_polygon,
    precedes,
    supersingular,
)
from .strata import (
    StrataRecord,
    c_leaf,
    conjectured_max_total_dim,
    cu,
    i_leaf,
    sdim,
    strata_table,
)
from .dieudonne import (
    HomGroup,
    ImageChain,
    TruncatedDieudonneModule,
    a_number,
    brute_force_homs,
    direct_sum,
    frobenius_newton_polygon,
    hom_group,
    minimal_module,
    minimal_of_polygon,
    restriction_image_chain,
)
from .eo import BT1Module, ElementarySequence, bt1_of_xi, canonical_filtration, elementary_sequence
from .polarization import (
    CommonSource,
    IsogenyMove,
    QuasiPolarizationForm,
    common_source,
    degree_exponent,
    enumerate_forms,
    isogeny_moves,
    parse_form,
    principal_form,
)

__version__ = "0.1.0"

__all__ = [
    "BT1Module",
    "BoundError",
    "BoundExceeded",
    "CommonSource",
    "ElementarySequence",
    "HomGroup",
    "ImageChain",
    "InputError",
    "InternalCheckError",
    "IsogenyMove",
    "NewtonPolygon",
    "NewtonStrataError",
    "NotSymmetric",
    "QuasiPolarizationForm",
    "SearchDepthExceeded",
    "SlopePair",
    "StrataRecord",
    "TruncatedDieudonneModule",
    "a_number",
    "brute_force_homs",
    "bt1_of_xi",
    "c_leaf",
    "canonical_filtration",
    "common_source",
    "conjectured_max_total_dim",
    "cu",
    "degree_exponent",
    "direct_sum",
    "elementary_sequence",
    "enumerate_forms",
    "enumerate_polygons",
    "enumerate_symmetric",
    "frobenius_newton_polygon",
    "from_pairs",
    "from_slopes",
    "hasse_diagram",
    "hom_group",
    "i_leaf",
    "isogeny_moves",
    "minimal_module",
    "minimal_of_polygon",
    "ordinary",
    "parse_form",
    "parse_polygon",
    "precedes",
    "principal_form",
    "restriction_image_chain",
    "sdim",
    "strata_table",
    "supersingular",
]
