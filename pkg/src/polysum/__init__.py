"""Exact Minkowski sums, face decompositions and f-vector identities."""

from .exact import affine_dim, rank, solve_strict_feasibility
from .polytope import (CharPoly, Face, FaceLattice, Facet, FVector, VPolytope, char_poly,
                       dual_face_map, euler_check, f_vector, face_lattice, hull, interval,
                       polar_dual)
from .minkowski import (MinkowskiSum, SumDecomposition, decompose_faces, delta_vector,
                        is_relatively_general_position, minkowski_sum, normal_cone,
                        perturb_to_general_position, relint_witness)
from .flag import FlagVector, GradedPoset, flag_vector, from_face_lattice, is_eulerian
from .report import VerifierReport

__all__ = [
    "affine_dim", "rank", "solve_strict_feasibility",
    "CharPoly", "Face", "FaceLattice", "Facet", "FVector", "VPolytope", "char_poly",
    "dual_face_map", "euler_check", "f_vector", "face_lattice", "hull", "interval", "polar_dual",
    "MinkowskiSum", "SumDecomposition", "decompose_faces", "delta_vector",
    "is_relatively_general_position", "minkowski_sum", "normal_cone",
    "perturb_to_general_position", "relint_witness",
    "FlagVector", "GradedPoset", "flag_vector", "from_face_lattice", "is_eulerian",
    "VerifierReport",
]

__version__ = "0.1.0"
