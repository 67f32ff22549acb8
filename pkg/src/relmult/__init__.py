"""Relative mixed multiplicities of multigraded algebras over a prime field.

Graded pieces are handled degree by degree with exact linear algebra over
GF(p); multiplicities are read off certified polynomial fits of dimension
counts.
"""

from .gring import (DEFAULT_PRIME, WHOLE, ModuleSpec, MultigradedRing, PieceCache,
                    SubspacePiece, full_piece, normal_form, piece_dim, polynomial_ring,
                    power_piece, quotient_basis, span, subspace_product)
from .hilbert import FitConfig, detect_stabilization, hilbert_fit, leading_coeffs, proj_dim
from .maps import (LinearSystem, compare_linear_systems, exceptional_multidegrees,
                   graph_multidegrees, projective_degrees, rees_piece)
from .multiplicity import (ProblemSpec, buchsbaum_rim, criteria, decomposition_check,
                           e_infinity, j_sharp, lambda_AB, lambda_KT, lambda_sharp,
                           rel_mixed_mult, suv_relative_mult)
from .poly import Poly

__version__ = "0.1.0"
