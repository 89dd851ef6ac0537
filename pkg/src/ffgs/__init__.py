"""Exact computations with finite flat group schemes over Dedekind bases.

Group schemes are given by the structure tensors of their free Hopf algebras
over Z, Z_(p), Q or F_p; torsors are free algebras with a coaction over a point
or over the split torus line.  Every construction returns explicit witness
matrices that the verifiers replay.
"""

from .errors import (FFGSError, ImageNotHopf, IsoUndecided, ModelMismatch, NotFlat, NotHopfIdeal,
                     NotNormal, RankMismatch, SchemaError, StepBudgetExceeded, WitnessFailure)
from .hopf import (HopfAlgebra, HopfMorphism, Report, base_change, cartier_dual, compose,
                   factor_morphism, identity_morphism, is_closed_immersion, is_normal,
                   is_schematically_dominant, kernel_ideal, kernel_subgroup, quotient_algebra,
                   quotient_by_normal, verify_hopf)
from .iso import find_isomorphism, is_hopf_isomorphism
from .linalg import Matrix, Submodule, hnf, kernel, saturate, snf
from .models import (GenericSubgroup, flat_closure_subgroup, prolong_overgroup, prolongation_oracle,
                     quotient_model)
from .rings import BaseRing
from .torsors import (AffineBase, Triple, TripleMorphism, contract, contracted_product,
                      contraction_witness, extend_torsor, flat_closure_triple, generic_fiber_triple,
                      reduces_to, reductions, trivial_triple, verify_triple)

__version__ = "0.1.0"
