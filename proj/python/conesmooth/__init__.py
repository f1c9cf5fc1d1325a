from ._conesmooth import (
    EtaShape,
    Profile,
    build_profile,
    collapse,
    default_neck_slope,
    load_profile,
    obstruction,
    quotient_dist_round,
    ricci_diag,
    ricci_from_forms,
    sample_annulus,
    save_profile,
    smoothness,
    verify,
)

__all__ = [
    "EtaShape",
    "Profile",
    "build_profile",
    "collapse",
    "default_neck_slope",
    "load_profile",
    "obstruction",
    "quotient_dist_round",
    "ricci_diag",
    "ricci_from_forms",
    "sample_annulus",
    "save_profile",
    "smoothness",
    "verify",
]
