"""Exact classification of twisted forms over finite fields.

A twisted form is the hypersurface sum a_ij x_i x_j^q = 0 attached to a
square matrix A over F_{p^d}, with q a power of p; a basis change T acts
by A -> transpose(T).A.T^(q).  The package normalizes matrices under this
action, emits replayable certificates for every reduction, verifies them
independently, and reports on the geometry of the normal forms (points,
singularities, tangent behavior, stabilizers, brute-force orbits).
"""

from .errors import (BudgetError, ExtensionCapError, InputError, ShapeError,
                     TwistformError, UnsupportedRankError, VerificationError)
from .gf import (ENUM_LIMIT, MAX_EXT_DEGREE, FieldCtx, FieldElem, build_field,
                 elem_from_dict, elem_to_dict, embed, enumerate_elements,
                 field_from_dict, field_to_dict, frobenius_pow, kth_root,
                 prime_power, subfield_elements, twist_exponent)
from .linalg import (MatrixF, SemilinearSpec, TwistedForm, complete_basis,
                     congruence, form_value, rank_kernel,
                     semilinear_fixed_space)
from .normform import (LABEL_KINDS, Certificate, NormalFormLabel, TraceStep,
                       e_matrix, label_matrix, plane_label_for_s, w_matrix)
from .fullrank import (FullRankWitness, asymmetry, hermitian_diagonalize,
                       hermitize, lang_solve, normalize_full_rank,
                       scale_diagonal_to_identity)
from .classify import (classify_corank_one, classify_form, classify_plane,
                       lemma4_reduce, lemma5_step, lemma_G_chain,
                       lemma_H_chain, lemma_H_prime_chain, move_kernel_to_last,
                       random_gl, random_matrix_of_rank)
from .verify import is_valid, verify_certificate
from .certio import (certificate_from_dict, certificate_to_dict,
                     label_from_dict, label_to_dict, matrix_from_dict,
                     matrix_to_dict, step_from_dict, step_to_dict)
from .geometry import (AutReport, ConeData, FiberClass, ProjectivePoint,
                       RoundtripReport, StrangenessReport, aut_membership,
                       aut_report, aut_structural_check, cone_invariants,
                       count_points, enum_points, fiber_class,
                       point_count_vector, rational_roundtrip,
                       singular_points, strangeness_center,
                       tangent_hyperplane)
from .orbits import (OrbitClass, OrbitReport, brute_force_orbits,
                     enumerate_gl, enumerate_matrices, gl_order)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
