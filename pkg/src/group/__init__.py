from .group_core import (
    Point,
    Prime,
    RootOfUnityExponent,
    add,
    as_prime,
    character,
    format_point,
    fraction_point,
    h_of_index,
    i_map,
    i_power,
    lambda_value,
    lemma41_classify,
    negate,
    omega_of_index,
    parse_point,
    rho,
    shift,
    subtract,
    theta,
    truncate,
    walsh,
    walsh_dual,
)

__all__ = [
    "Point",
    "Prime",
    "RootOfUnityExponent",
    "add",
    "as_prime",
    "character",
    "format_point",
    "fraction_point",
    "h_of_index",
    "i_map",
    "i_power",
    "lambda_value",
    "lemma41_classify",
    "negate",
    "omega_of_index",
    "parse_point",
    "rho",
    "shift",
    "subtract",
    "theta",
    "truncate",
    "walsh",
    "walsh_dual",
]
