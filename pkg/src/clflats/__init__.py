"""Exact toolkit for Cameron-Liebler sets of maximal totally isotropic
flats in classical affine spaces over small finite fields.

Everything is exact: finite-field tables, big-integer q-analog counts,
fraction-free linear algebra, and closed-form association scheme data
cross-checked against constructed matrices.
"""

from .cl import (
    FlatSet,
    battery,
    cl_parameter,
    classify_nu1,
    combine,
    construct_pencil,
    degree_identity,
    intersecting_check,
    is_cameron_liebler,
    pencil_distribution,
    restrict_cl,
    search_cl,
    set_denominator,
)
from .field import FieldElement, FiniteField, conjugate, e_power, gauss_binomial, make_field
from .flats import (
    Flat,
    container_flats,
    enumerate_flats,
    flat_join,
    flat_make,
    flat_meet,
    flats_in,
    flats_through,
    incidence_matrix,
    incidence_rank,
)
from .geometry import (
    Isometry,
    SpaceConfig,
    Subspace,
    canonicalize,
    enumerate_isotropic,
    form_value,
    point_graph,
    random_isometry,
    space_config,
    subspace_type,
)
from .scheme import (
    INFINITY,
    SchemeTables,
    column_uniqueness,
    dual_polar_eigenvalue,
    dual_polar_multiplicity,
    inner_distribution,
    phi_piecewise,
    q_valuation,
    relation_of,
    scheme_eigenvalue,
    scheme_multiplicity,
    scheme_tables,
    valency,
    verify_scheme,
)
from .spreads import (
    Spread,
    classify_set,
    enumerate_spreads,
    is_switching_pair,
    spread_type_I,
    spread_type_II,
    typeI_span_check,
    typeII_span_check,
)

__version__ = "0.1.0"
