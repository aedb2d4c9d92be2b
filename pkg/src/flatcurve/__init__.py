"""Finite-window analysis of infinite zero sequences in the plane.

Windows of a zero sequence (exact rational or eps-tolerant float
coordinates) feed four analyses: evaluation of the canonical product
vanishing on the sequence, saddle connections and holonomy of the induced
flat geometry, path lifting to m-cyclic branched covers, and
classification of the window's symmetry group with translation-equivalence
and moduli coordinates on the side.
"""

from .errors import (
    ContourThroughZero,
    ContractingGenerator,
    DegenerateWindow,
    DuplicatePoint,
    EmptyWindow,
    FlatcurveError,
    IoError,
    ModeMismatch,
    NoConvergence,
    NonFinite,
    PathThroughBranchPoint,
    PoleInAction,
    RadiusTooLarge,
    SingularMatrix,
    TooFewPoints,
    ZeroDivisor,
)
from .zseq import (
    EXACT,
    GeneratorSpec,
    Mode,
    PointIndex,
    ValidationReport,
    ZPoint,
    ZeroWindow,
    canonical_order,
    float_mode,
    generate,
    sup_norm,
    validate,
    window_from_json,
    window_to_json,
)
from .flatgeom import (
    DirectionProfile,
    HolonomySet,
    SaddleSegment,
    direction_profile,
    has_holonomy_vector,
    holonomy,
    is_visible,
    point_blocks,
    saddle_connections,
    visible_pairs,
    visible_pairs_bruteforce,
    window_collinear,
)
from .weierstrass import (
    ZeroCheck,
    choose_degrees,
    count_zeros,
    elementary_factor,
    eval_f,
    refine_zero,
)
from .cover import (
    ConeAngle,
    CoverPoint,
    CrossingEvent,
    CutSystem,
    LiftedSaddle,
    SingularitySets,
    build_cuts,
    cone_angle,
    crossing_log,
    fiber,
    lift_path,
    lift_saddle,
    singularity_sets,
)
from .veech import (
    ClosureReport,
    Mat2,
    StabilizerSearchConfig,
    VeechClass,
    classify,
    group_closure_check,
    hol_stabilizer,
    is_contracting,
    pprime_symmetry,
    sandwich_report,
    stabilizer_candidates,
)
from .equiv import (
    EquivResult,
    ModuliForm,
    affine_automorphisms,
    moduli_action,
    moduli_canonical,
    translation_equiv,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
