"""Karteszi configurations K(n; ell, m): construction, analysis, rendering.

The package builds point-line 4-configurations from the diagonals of regular
n-gons, detects and classifies the parameter choices where extra incidences
break the ((3n)_4) structure, and serializes or renders the results.
"""

from .analyze import (
    ConcurrencyTriple,
    CrossValidation,
    FamilyTag,
    IncidenceReport,
    PRArcs,
    astral_obstruction,
    concurrent_triples,
    cross_validate,
    is_exceptional,
    pr_equation,
    scan,
    second_vertex,
)
from .combin import (
    CanonicalForm,
    IncidenceStructure,
    LeviGraph,
    are_isomorphic,
    canonical_form,
    connected,
    dual,
    from_geometry,
    is_configuration,
    levi,
)
from .config import (
    CelestialSymbol,
    KConfig,
    KParams,
    build,
    celestial_symbol,
    connectivity,
    validate_params,
)
from .geom import (
    Angle,
    DEFAULT_TOL,
    Line,
    Point,
    Similarity,
    TolerancePolicy,
    apply_similarity,
    compose,
    incident,
    intersect,
    line_through,
    lines_equal,
)
from .io_render import (
    RenderStyle,
    cli_main,
    read_document,
    render_svg,
    svg_text,
    write_document,
)
from .ngon import (
    DerivedNGon,
    DiagonalRef,
    RegularNGon,
    common_line,
    diagonal,
    kth_ngon,
    max_class,
    midpoint_map_check,
    phi,
    vertex,
)

__version__ = "0.1.0"
