"""Exact arithmetic for dg Lie and truncated L∞ algebras, their morphisms,
gauge homotopies, homotopy transfer and inversion, cylinders and the
truncated Quillen functors."""

from .algebra import (
    LInftyAlgebra, LInftyMorphism, chain_coalgebra, check_morphism, check_structure,
    coalgebra_map_injective, compose_morphisms, decalage_sign, direct_sum, exterior_basis,
    identity_morphism, induced_coalgebra_map, jacobi_violations, morphism_curvature,
    zero_algebra, zero_morphism,
)
from .convolution import (
    Convolution, ConvolutionElement, HomotopyCertificate, algebra_gauge, bch_compose,
    build_convolution, find_homotopy, gauge_action, mc_curvature, pushforward,
)
from .cylinder import build_cylinder, cylinder_morphism, endpoint, evaluate_at, section
from .errors import *  # noqa: F401,F403
from .graded import (
    ContractionData, GradedLinearMap, GradedVectorSpace, check_complex,
    cohomology_contraction, koszul_sign,
)
from .inversion import embedding_inverse, formal_inverse, homotopy_inverse
from .quillen import functor_C, functor_L, hom_set_bijection, q_backward, q_forward
from .transfer import TransferResult, transfer, tree_transfer

__version__ = "0.1.0"
