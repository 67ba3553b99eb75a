from .set_algebra import (
    AnnulusSplit,
    Cylinder,
    CylinderSet,
    Profile,
    annulus_split,
    complement_in,
    congruence_partition,
    contains,
    dilate,
    dual_cell,
    intersect,
    parse_cylinder,
    rho_profile,
    subtract,
    symmetric_difference,
    theta_neighbourhood,
    translate,
    union,
    union_all,
    unit_cylinder,
)
from .streams import DEFAULT_DEPTH, GeneratedSource, PieceStream, TailFamily, as_stream, lemma_stream, measure, stream_enumerate
from .set_file import ParsedSet, format_set_file, parse_set_file, parse_set_text

__all__ = [
    "AnnulusSplit",
    "Cylinder",
    "CylinderSet",
    "DEFAULT_DEPTH",
    "GeneratedSource",
    "ParsedSet",
    "PieceStream",
    "Profile",
    "TailFamily",
    "annulus_split",
    "as_stream",
    "complement_in",
    "congruence_partition",
    "contains",
    "dilate",
    "dual_cell",
    "format_set_file",
    "intersect",
    "lemma_stream",
    "measure",
    "parse_cylinder",
    "parse_set_file",
    "parse_set_text",
    "rho_profile",
    "stream_enumerate",
    "subtract",
    "symmetric_difference",
    "theta_neighbourhood",
    "translate",
    "union",
    "union_all",
    "unit_cylinder",
]
