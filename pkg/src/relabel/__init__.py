"""Identity resolution for look-alike objects after a scene layout changes.

A camera that only ever sees part of a rearranged scene must decide which
previously known object each detection corresponds to.  This package models
the scene, prunes the candidate set with a distance-weighted partition of
the floor around storage sites, scores detection/candidate pairs with a
pose-and-shape cost, and recovers the cost-minimizing one-to-one labeling.
A simulation harness measures how accuracy degrades with layout noise and
how pruning trades accuracy against solve time.
"""

from .costs import (
    CostBreakdown,
    CostMatrix,
    CostWeights,
    build_cost_matrix,
    default_weights,
    dimension_cost,
    pair_cost,
    rotation_cost,
    total_cost,
    translation_cost,
)
from .harness import (
    StopRecord,
    SweepConfig,
    SweepResult,
    aggregate,
    run_noise_sweep,
    run_threshold_sweep,
    score_stop,
    write_rows_csv,
    write_summary_csv,
)
from .noise import ZERO_NOISE, NoiseModel, derive_seed, make_rng, perturb_layout
from .partition import (
    PartitionError,
    SiteEntry,
    SiteProbabilities,
    VoronoiSite,
    candidate_labels,
    containing_site,
    prune_sites,
    site_distances,
    site_probabilities,
)
from .path import (
    BezierSegment,
    CameraPath,
    camera_stops,
    catmull_rom_loop,
    circle_path,
    load_path,
    pose_at_arc,
    save_path,
)
from .scene import (
    BoxDims,
    CameraState,
    Detection,
    Observation,
    ObjectInstance,
    PlanarPose,
    SceneBounds,
    SceneLayout,
    SceneParseError,
    SceneValidationError,
    is_visible,
    load_observation,
    load_scene,
    save_observation,
    save_scene,
    synthesize_observation,
    visible_objects,
)
from .scenegen import ARCHETYPES, SceneArchetype, generate_scene, patrol_route
from .solver import (
    AssignmentError,
    AssignmentProblem,
    AssignmentResult,
    BruteForceBoundError,
    InfeasibleAssignmentError,
    PreparedProblem,
    brute_force_solve,
    prepare_problem,
    resolve_identities,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "ARCHETYPES",
    "AssignmentError",
    "AssignmentProblem",
    "AssignmentResult",
    "BezierSegment",
    "BoxDims",
    "BruteForceBoundError",
    "CameraPath",
    "CameraState",
    "CostBreakdown",
    "CostMatrix",
    "CostWeights",
    "Detection",
    "InfeasibleAssignmentError",
    "NoiseModel",
    "ObjectInstance",
    "Observation",
    "PartitionError",
    "PlanarPose",
    "PreparedProblem",
    "SceneArchetype",
    "SceneBounds",
    "SceneLayout",
    "SceneParseError",
    "SceneValidationError",
    "SiteEntry",
    "SiteProbabilities",
    "StopRecord",
    "SweepConfig",
    "SweepResult",
    "VoronoiSite",
    "ZERO_NOISE",
    "aggregate",
    "brute_force_solve",
    "build_cost_matrix",
    "camera_stops",
    "candidate_labels",
    "catmull_rom_loop",
    "circle_path",
    "containing_site",
    "default_weights",
    "derive_seed",
    "dimension_cost",
    "generate_scene",
    "is_visible",
    "load_observation",
    "load_path",
    "load_scene",
    "make_rng",
    "pair_cost",
    "patrol_route",
    "perturb_layout",
    "pose_at_arc",
    "prepare_problem",
    "prune_sites",
    "resolve_identities",
    "rotation_cost",
    "run_noise_sweep",
    "run_threshold_sweep",
    "save_observation",
    "save_path",
    "save_scene",
    "score_stop",
    "site_distances",
    "site_probabilities",
    "solve",
    "synthesize_observation",
    "total_cost",
    "translation_cost",
    "visible_objects",
    "write_rows_csv",
    "write_summary_csv",
]
