"""
wignerkit: finite-dimensional tooling around Wigner's theorem and its relatives.

Projective spaces and Grassmannians of C^n, principal angles, the Grassmann
graph, reconstruction of unitary and anti-unitary operators from
orthogonality preserving maps, and two-valued measure search on
Kochen-Specker ray sets.
"""

from .errors import WignerKitError
from .grassmann import (
    GrassmannPath,
    PrincipalAngles,
    bridge,
    geodesic,
    geodesic_through,
    grassmann_distance,
    is_adjacent,
    is_compatible,
    is_ortho_adjacent,
    is_orthogonal,
    max_compatible_clique,
    principal_angles,
    star_members,
    top_members,
)
from .hilbert import (
    DEFAULT_TOL,
    Ray,
    Subspace,
    Tolerance,
    complement,
    inner,
    intersect,
    orthonormalize,
    projection_of,
    subspace_sum,
)
from .measure import (
    OrthoHypergraph,
    build_hypergraph,
    find_two_valued_measure,
    load_fixture,
    verify_assignment,
)
from .operators import Isometry, OperatorClass, required_rays
from .projective import (
    Line,
    RayMapTable,
    check_lineation,
    check_nondegenerate,
    check_orthogonality_preserving,
    induced_line_image,
    line_through,
    ray_orthogonal,
    sample_line,
    transition_probability,
)
from .reconstruct import (
    GrassmannOracle,
    ReconstructionResult,
    check_conditions_AB,
    classify_and_reconstruct,
    descend_full,
    descend_star,
    tabulate,
    verify_induced,
)

__all__ = [
    "WignerKitError",
    "Isometry",
    "OperatorClass",
    "required_rays",
    "GrassmannPath",
    "PrincipalAngles",
    "bridge",
    "geodesic",
    "geodesic_through",
    "grassmann_distance",
    "is_adjacent",
    "is_compatible",
    "is_ortho_adjacent",
    "is_orthogonal",
    "max_compatible_clique",
    "principal_angles",
    "star_members",
    "top_members",
    "DEFAULT_TOL",
    "Ray",
    "Subspace",
    "Tolerance",
    "complement",
    "inner",
    "intersect",
    "orthonormalize",
    "projection_of",
    "subspace_sum",
    "OrthoHypergraph",
    "build_hypergraph",
    "find_two_valued_measure",
    "load_fixture",
    "verify_assignment",
    "Line",
    "RayMapTable",
    "check_lineation",
    "check_nondegenerate",
    "check_orthogonality_preserving",
    "induced_line_image",
    "line_through",
    "ray_orthogonal",
    "sample_line",
    "transition_probability",
    "GrassmannOracle",
    "ReconstructionResult",
    "check_conditions_AB",
    "classify_and_reconstruct",
    "descend_full",
    "descend_star",
    "tabulate",
    "verify_induced",
]

__version__ = "0.1.0"
