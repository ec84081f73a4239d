"""Exact arithmetic for affine Hecke algebras with unequal parameters.

Laurent-polynomial scalars, based root data, affine root systems and their
bases, Iwahori-Matsumoto and Bernstein presentations, homomorphisms between
them, and quotient root systems attached to marked affine roots.
"""

from .affine import (AffineRoot, AffineRootSystem, affine_A, affine_C, basis_containing_J,
                     basis_from_point, enumerate_bases, extend_to_basis)
from .bernstein import AffineHecke, BernsteinElt, LabelFunctions
from .errors import HeckeLabError
from .iwahori import AffineCoxeter, FiniteCoxeter, HeckeElt, IwahoriHecke
from .maps import (StandardBernstein, a1_classify, a1_spec, bernstein_to_standard,
                   build_comparison, involution, params_from_p, refine_datum,
                   standard_to_bernstein, verify_hom)
from .quotient import MarkedRoots, build_quotient, morris_datum
from .report import Report
from .rootdatum import BasedRootDatum, cartan_datum
from .scalar import ONE, Scalar, parse_scalar, q_power

__version__ = "0.1.0"

__all__ = [
    "AffineRoot", "AffineRootSystem", "affine_A", "affine_C", "basis_containing_J",
    "basis_from_point", "enumerate_bases", "extend_to_basis",
    "AffineHecke", "BernsteinElt", "LabelFunctions", "HeckeLabError",
    "AffineCoxeter", "FiniteCoxeter", "HeckeElt", "IwahoriHecke",
    "StandardBernstein", "a1_classify", "a1_spec", "bernstein_to_standard", "build_comparison",
    "involution", "params_from_p", "refine_datum", "standard_to_bernstein", "verify_hom",
    "MarkedRoots", "build_quotient", "morris_datum", "Report", "BasedRootDatum", "cartan_datum",
    "ONE", "Scalar", "parse_scalar", "q_power",
]
