from .scaling_sets import (
    EtaFunction,
    GssConstruction,
    UpsilonChain,
    closure_verify,
    consistency_check,
    eta,
    gss_check,
    gss_from_wavelet,
    i_preimage,
    theorem47_check,
    upsilon_construct,
    verify_gss,
    wavelet_from_gss,
)
from .wavelet_checker import (
    check_dilation_tiling,
    check_multiwavelet_set,
    check_translation_congruence,
    check_wavelet_set,
    dilation_projection,
    packing_tiling_check,
)

__all__ = [
    "EtaFunction",
    "GssConstruction",
    "UpsilonChain",
    "check_dilation_tiling",
    "check_multiwavelet_set",
    "check_translation_congruence",
    "check_wavelet_set",
    "closure_verify",
    "consistency_check",
    "dilation_projection",
    "eta",
    "gss_check",
    "gss_from_wavelet",
    "i_preimage",
    "packing_tiling_check",
    "theorem47_check",
    "upsilon_construct",
    "verify_gss",
    "wavelet_from_gss",
]
