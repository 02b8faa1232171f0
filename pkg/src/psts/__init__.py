"""Partial Steiner triple systems: weaving and related products, subconfiguration
search, isomorphisms and automorphism groups."""

from .core import (
    UNDEFINED,
    IncidenceStructure,
    InvalidStructure,
    derived_triangle,
    params,
    subspace_closure,
    third_point,
    triangle_series,
    triangles,
    validate,
)
from .groups import AbelianGroup
from .constructions import (
    bose,
    catalog,
    convolve,
    linear_completion,
    poly_triangle,
    quotient_by_base,
    weave,
    weave_eps,
)
from .detect import Pattern, check_property, classify_triangle, find_subconfig
from .morphisms import are_isomorphic, automorphism_group, embedding, isomorphism

__version__ = "0.1.0"
