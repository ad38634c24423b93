"""Projective geometric algebra for Minkowski spacetime in 1+1, 2+1 and 3+1 dimensions.

Spaces ``M2``, ``M3`` and ``M4`` add a degenerate ``e0`` to a Minkowski
signature; the last basis vector squares to -1 and plays the role of time.
"""
from . import kinematics
from .algebra import (
    M2,
    M3,
    M4,
    SPACES,
    Multivector,
    Signature,
    commutator,
    complement,
    euclidean_oracle,
    geometric_product,
    grade_select,
    inner,
    inverse,
    is_simple,
    norm,
    polar,
    regressive_join,
    reverse,
    space,
    uncomplement,
    wedge,
)
from .config import Tolerances, get_tolerances, set_tolerance, tolerance
from .entities import (
    Classification,
    Entity,
    angle_lines,
    as_entity,
    classify,
    distance_line_point,
    distance_parallel_lines,
    distance_points,
    is_at_infinity,
    make_hyperplane,
    make_line,
    make_plane,
    make_point,
    metric_kind,
    normalize_point,
    orientation,
    origin,
    point_coords,
    project,
    reflect,
    reject,
    simplex_volume,
    triangle_area,
    worldline_m3,
    worldline_m4,
)
from .errors import (
    ConvergenceError,
    MpgaError,
    NotInvertible,
    ParametrizationError,
    SignatureMismatch,
    SuperluminalError,
    UndefinedMeasure,
    UndefinedOrientation,
    UsageError,
)
from .motions import (
    BivectorDecomposition,
    MotionDescriptor,
    Spinor,
    apply,
    classify_motion,
    decompose_bivector_m3,
    decompose_bivector_m4,
    decompose_trivector_m4,
    exp_bivector,
    irreducible_null_action,
    make_boost_m3,
    make_boost_m4,
    make_euclidean_m3,
    make_euclidean_m4,
    make_rotation,
    make_rotation_m2,
    make_translation,
    orbit,
)
from .notation import render

__version__ = "0.1.0"
