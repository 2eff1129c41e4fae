"""
v1di4: exact computation of the v1-periodic homotopy groups of DI(4).
"""

__version__ = "0.1.0"

from v1di4.config import DEFAULT_CONFIG, V1Config
from v1di4.types import FinAbGroup2, Justification, SplitCertificate
from v1di4.padic_core import OddRational, PadicResidue, dlog3, lifting_trace, modpow2, solve_L
from v1di4.zlinalg import IntMatrix, coker_presentation, snf
from v1di4.adams_di4 import (
    AdamsFreeModule,
    commutator_solve,
    di4_psi_matrices,
    exponent_bound,
    ko_phi1,
    psi_scalar,
    verify_commutation,
)
from v1di4.graded import AdamsGradedTable, AdamsModule, PsiLaw, smash_moore, suspend_module
from v1di4.pseudosphere import (
    Classification,
    adams_table_T,
    adams_table_T_moore,
    match_adams_modules,
    order_counting_certificate,
    pseudosphere_discriminator,
    shifted_adams_table,
)
from v1di4.homotopy import (
    lightning_flash,
    pi_M_K2,
    pi_T_moore,
    reconstruct_pi_T,
    splitting_oracle,
    v1_homotopy,
)

__all__ = [
    "V1Config",
    "DEFAULT_CONFIG",
    "FinAbGroup2",
    "Justification",
    "SplitCertificate",
    "OddRational",
    "PadicResidue",
    "dlog3",
    "lifting_trace",
    "modpow2",
    "solve_L",
    "IntMatrix",
    "coker_presentation",
    "snf",
    "AdamsFreeModule",
    "commutator_solve",
    "di4_psi_matrices",
    "exponent_bound",
    "ko_phi1",
    "psi_scalar",
    "verify_commutation",
    "AdamsGradedTable",
    "AdamsModule",
    "PsiLaw",
    "smash_moore",
    "suspend_module",
    "Classification",
    "adams_table_T",
    "adams_table_T_moore",
    "match_adams_modules",
    "order_counting_certificate",
    "pseudosphere_discriminator",
    "shifted_adams_table",
    "lightning_flash",
    "pi_M_K2",
    "pi_T_moore",
    "reconstruct_pi_T",
    "splitting_oracle",
    "v1_homotopy",
]
