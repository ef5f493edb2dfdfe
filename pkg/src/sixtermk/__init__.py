"""sixterm-k: exact computations with six-term K-data, coefficients and Bocksteins."""

from ._kernel import BACKEND
from .catalog import E, F, F1, ExtensionDescriptor, build, catalog_descriptors, k_groups_of, parse_descriptor
from .coefficients import (
    CoefficientExactnessWarning,
    ModNKGroup,
    beta_map,
    coefficient_layer,
    coefficient_sequence,
    k_with_coefficients,
    rho_map,
    sign_twist,
    times_n,
)
from .fgab import (
    FinAbGroup,
    GroupHom,
    cokernel_presentation,
    ext_group,
    hom_algebra,
    hom_group,
    image_and_cokernel,
    is_exact_pair,
    kernel,
    smith_normal_form,
    tensor_mod,
    tor_mod,
)
from .functors import SignPattern, TILDE, lambda_transform, mc_data, mc_iter, x_e_iso
from .intmatrix import IntMatrix
from .invariant import DiagramTemplate, IdealKInvariant, compute_invariant, hom_lambda, verify_diagrams
from .sixterm import SixTermHom, SixTermSeq, hom_six, rotate3, signed_iso_search, validate_exactness
from .solver import (
    ContradictionError,
    SequenceConstraint,
    deduce,
    full_invariant,
    populate_h_maps,
    solve_H_layer,
    witness_search,
)

__version__ = "0.1.0"
