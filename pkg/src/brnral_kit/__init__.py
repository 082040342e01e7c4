"""Finite Galois-cohomology calculators for the unramified algebraic Brauer
group of homogeneous spaces, with brute-force oracles."""

from .abmod import (AbelianProjection, EvalPairing, FGAbelianModule, GaloisContext,
                    ModuleMorphism, coinvariants_and_fixed, dual_module)
from .brnral import (BrnralInstance, BrnralResult, brnral_char_zero, brnral_finite_field,
                     kernel_comparison, real_orthogonality)
from .cohom import (Cocycle1Ab, Cocycle1NonAb, Cocycle2, cup_pairing, h1_abelian, h1_cyclic,
                    h1_nonabelian, h2_solve, inflate, restrict)
from .errors import InvariantError, LevelExhausted
from .groups import (FiniteGroup, GroupAction, GroupMorphism, Subgroup, abelianization,
                     conjugacy_test, derived_subgroup, extension_from_cocycle, generated_subgroup,
                     semidirect_product)
from .linalg import smith_solve
from .norms import NormContext
from .torf import (TorfExtensionData, TorusLattice, build_finite_subgroup, enlarge_subgroup,
                   h1_surjectivity_report, phi_preimage, semidirect, torsion_module)

__version__ = "0.1.0"

__all__ = [
    "AbelianProjection", "BrnralInstance", "BrnralResult", "Cocycle1Ab", "Cocycle1NonAb",
    "Cocycle2", "EvalPairing", "FGAbelianModule", "FiniteGroup", "GaloisContext", "GroupAction",
    "GroupMorphism", "InvariantError", "LevelExhausted", "ModuleMorphism", "NormContext",
    "Subgroup", "TorfExtensionData", "TorusLattice", "abelianization", "brnral_char_zero",
    "brnral_finite_field", "build_finite_subgroup", "coinvariants_and_fixed", "conjugacy_test",
    "cup_pairing", "derived_subgroup", "dual_module", "enlarge_subgroup", "extension_from_cocycle",
    "generated_subgroup", "h1_abelian", "h1_cyclic", "h1_nonabelian", "h1_surjectivity_report",
    "h2_solve", "inflate", "kernel_comparison", "phi_preimage", "real_orthogonality", "restrict",
    "semidirect", "semidirect_product", "smith_solve", "torsion_module",
]
