"""Exact-arithmetic toolkit for linear and affine stress spaces of embedded
simplicial complexes, with executable verifiers for the structural theorems
they satisfy and probes for the open questions around them."""

from .complexes import (
    FHGVectors, SimplicialComplex, StructureReport, boundary_of, classify,
    cone, face, fhg, g_number, is_flag, join, max_missing_dim,
    minimal_interior_faces, missing_faces,
)
from .embeddings import (
    Embedding, GenericityCertificate, ThetaSystem, affine_dependencies,
    affine_transform, check_polytopal, generic_random, genericity_certificate,
    natural, quotient_embedding, recover_canonical, theta,
)
from .generators import (
    FlipStep, FlipTrace, Instance, bistellar_flip, cross_polytope,
    cyclic_polytope, legal_flips, murai_nevo_ball, polygon_join,
    random_pl_sphere, replay_trace, simplex_boundary, stacked_join,
    stacked_sphere,
)
from .homology import homology_ranks, is_homology_ball, is_homology_sphere
from .stresses import (
    AFFINE, LINEAR, StressPoly, StressSpace, cone_lift, derivative,
    derivative_by_form, derivative_span, is_stress, monomial_basis,
    recover_affine_type, sign_vector, spaces_equal, squarefree_part,
    stress_space, sum_spaces, support_faces,
)
from .verifiers import (
    CHECKS, PROBES, VerificationReport, positive_stress_on_missing_face,
    probe_conjecture, run_check, verify_antistar, verify_flag_g_bound,
    verify_kstacked, verify_lefschetz, verify_pou_affine1,
    verify_pou_affine_higher, verify_pou_linear, verify_pou_linear_join,
    verify_reconstruction, verify_rigidity, verify_star_surjection,
    verify_support,
)

__version__ = "0.1.0"
