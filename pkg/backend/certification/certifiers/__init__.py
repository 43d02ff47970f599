from .base import Certificate, Link, Tolerance, DEFAULT_TOLERANCE
from .block_operators import (
    cert_block_diagonal,
    cert_offdiag_convex,
    cert_offdiag_norm,
    cert_offdiag_power,
    cert_polarization,
    cert_rotation_scan,
)
from .cartesian import cert_cartesian_1, cert_cartesian_2, cert_mccarthy, cert_mixed_schwarz, cert_power_sum
from .classical import cert_half_power_norm, cert_spectral_radius_product, cert_sum_norm
from .products import (
    cert_cor_alpha,
    cert_lemma_refined_cs,
    cert_lemma_schwarz,
    cert_prop_refined,
    cert_remark_chain,
    cert_thm_half_rB,
    cert_thm_minmod,
    cert_thm_power_young,
    cert_thm_power_young_refined,
    cert_thm_young_refined,
    cert_young_scalar,
)

__all__ = [
    "Certificate", "Link", "Tolerance", "DEFAULT_TOLERANCE",
    "cert_block_diagonal", "cert_offdiag_convex", "cert_offdiag_norm", "cert_offdiag_power",
    "cert_polarization", "cert_rotation_scan",
    "cert_cartesian_1", "cert_cartesian_2", "cert_mccarthy", "cert_mixed_schwarz", "cert_power_sum",
    "cert_half_power_norm", "cert_spectral_radius_product", "cert_sum_norm",
    "cert_cor_alpha", "cert_lemma_refined_cs", "cert_lemma_schwarz", "cert_prop_refined",
    "cert_remark_chain", "cert_thm_half_rB", "cert_thm_minmod", "cert_thm_power_young",
    "cert_thm_power_young_refined", "cert_thm_young_refined", "cert_young_scalar",
]
