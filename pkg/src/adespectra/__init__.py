"""Exact spectral measures of ADE-type graphs and their cyclotomic decompositions."""

from .algebra import (
    LaurentPoly,
    Poly,
    PowerSeries,
    RationalFunction,
    det,
    poly_det,
    ratfun_equal,
    series_expand,
    substitute_z,
)
from .cyclotomic import (
    Decomposition,
    DecompositionProblem,
    SystemMatrix,
    build_system,
    decompose_graph,
    infer_period,
    solve,
    verify_witness,
)
from .errors import AdeSpectraError
from .graphs import (
    BipartiteGraph,
    GraphName,
    build_graph,
    decompose,
    default_catalog,
    loop_count,
    loop_counts,
    truncate_infinite,
)
from .measures import (
    CycloMeasure,
    MeasureAtom,
    MeasureCatalogEntry,
    catalog_measure,
    measure_t_series,
    moment,
    pushforward_moment,
    verify_measure,
)
from .recursion import (
    TailFamily,
    cyclotomic_simplify,
    family_t,
    family_theta,
    tail_family,
    verify_family,
)
from .series import jones_theta, poincare_resolvent, series_bundle, t_series

__version__ = "0.1.0"
