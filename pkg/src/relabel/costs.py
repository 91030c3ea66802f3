"""Match costs between detections and candidate labels.

A detection/candidate pair is scored by how far the object would have had to
move (translation, normalized by the scene diagonal), how much it would have
had to turn (rotation), and how badly its bounding box fits (dimension
ratio).  The three terms combine as

    total = c_d * (w_t * c_t + w_r * c_r)

so a box mismatch scales up whatever motion cost the pair already carries.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .scene import BoxDims, Detection, ObjectInstance, PlanarPose, SceneBounds, SceneValidationError

_DIM_PERMUTATIONS = tuple(itertools.permutations(range(3)))


@dataclass(frozen=True, slots=True)
class CostWeights:
    """Relative weight of the translation (w_t) and rotation (w_r) terms."""

    w_t: float
    w_r: float

    def __post_init__(self) -> None:
        for name in ("w_t", "w_r"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0.0:
                raise SceneValidationError(f"weight {name} must be >= 0, got {value}")
            object.__setattr__(self, name, value)
        if self.w_t + self.w_r <= 0.0:
            raise SceneValidationError("at least one cost weight must be positive")


def default_weights(bounds: SceneBounds) -> CostWeights:
    """Default weights scaled to the scene: w_t = 0.36 * sqrt(area), w_r = 1."""
    return CostWeights(w_t=0.36 * math.sqrt(bounds.area()), w_r=1.0)


def translation_cost(possible: PlanarPose, detected: PlanarPose, bounds: SceneBounds) -> float:
    """Distance between the two positions as a fraction of the scene diagonal.

    May exceed 1 when a detection lies outside the original bounds; no clamp.
    """
    return math.hypot(possible.x - detected.x, possible.z - detected.z) / bounds.diagonal()


def rotation_cost(yaw_possible: float, yaw_detected: float) -> float:
    """sin of half the absolute yaw difference; peaks at 1 for a 180 degree turn.

    Yaws are normalized to [0, 360) and the raw absolute difference is used
    with no shortest-arc folding: the sine is already symmetric about 180,
    so 90 and 270 degree differences score the same.
    """
    delta = abs(yaw_possible % 360.0 - yaw_detected % 360.0)
    return math.sin(delta * math.pi / 360.0)


def dimension_cost(possible: BoxDims, detected: BoxDims) -> float:
    """Best axis-ratio product over all ways of pairing the two boxes' axes.

    Each axis pair contributes max(a, b) / min(a, b) >= 1, so the product is
    1 exactly when some permutation of the detected box matches the other.
    """
    fixed = (possible.w, possible.h, possible.d)
    moved = (detected.w, detected.h, detected.d)
    best = math.inf
    for perm in _DIM_PERMUTATIONS:
        prod = 1.0
        for axis in range(3):
            a, b = moved[perm[axis]], fixed[axis]
            prod *= a / b if a >= b else b / a
        if prod < best:
            best = prod
    return best


def total_cost(c_t: float, c_r: float, c_d: float, weights: CostWeights) -> float:
    """Combine the three terms: c_d * (w_t * c_t + w_r * c_r)."""
    return c_d * (weights.w_t * c_t + weights.w_r * c_r)


def pair_cost(
    detection: Detection, candidate: ObjectInstance, bounds: SceneBounds, weights: CostWeights
) -> float:
    """Total cost of assigning `candidate`'s label to `detection`."""
    return total_cost(
        translation_cost(candidate.pose, detection.pose, bounds),
        rotation_cost(candidate.pose.yaw, detection.pose.yaw),
        dimension_cost(candidate.dims, detection.dims),
        weights,
    )


@dataclass(frozen=True, slots=True)
class CostBreakdown:
    """Per-term view of one detection/candidate cell."""

    c_t: float
    c_r: float
    c_d: float
    total: float


@dataclass(frozen=True, slots=True, eq=False)
class CostMatrix:
    """Dense N x M cost table from N detections to M candidate labels.

    Rows follow the detection order of the observation; columns follow
    `candidates`.  All arrays are read-only.
    """

    candidates: tuple[str, ...]
    candidate_types: tuple[str, ...]
    detection_types: tuple[str | None, ...]
    c_t: np.ndarray
    c_r: np.ndarray
    c_d: np.ndarray
    total: np.ndarray

    def __post_init__(self) -> None:
        n, m = len(self.detection_types), len(self.candidates)
        for name in ("c_t", "c_r", "c_d", "total"):
            arr = getattr(self, name)
            if arr.shape != (n, m):
                raise SceneValidationError(
                    f"cost array '{name}' has shape {arr.shape}, expected {(n, m)}"
                )
            if arr.size and not np.isfinite(arr).all():
                raise SceneValidationError(f"cost array '{name}' contains non-finite cells")
            arr.flags.writeable = False

    @property
    def shape(self) -> tuple[int, int]:
        return self.total.shape

    def cell(self, row: int, col: int) -> CostBreakdown:
        return CostBreakdown(
            c_t=float(self.c_t[row, col]),
            c_r=float(self.c_r[row, col]),
            c_d=float(self.c_d[row, col]),
            total=float(self.total[row, col]),
        )


def build_cost_matrix(
    detections: tuple[Detection, ...],
    candidates: tuple[ObjectInstance, ...],
    bounds: SceneBounds,
    weights: CostWeights,
) -> CostMatrix:
    """Score every detection against every candidate label.

    Candidate label order is preserved as given; duplicate labels are
    rejected.  Works for empty detection or candidate sets (0-sized axes).
    """
    labels = tuple(c.label for c in candidates)
    if len(set(labels)) != len(labels):
        raise SceneValidationError("candidate labels must be unique")
    n, m = len(detections), len(candidates)
    diagonal = bounds.diagonal()

    det_xz = np.array([[d.pose.x, d.pose.z] for d in detections], dtype=float).reshape(n, 2)
    cand_xz = np.array([[c.pose.x, c.pose.z] for c in candidates], dtype=float).reshape(m, 2)
    diff = det_xz[:, None, :] - cand_xz[None, :, :]
    c_t = np.hypot(diff[:, :, 0], diff[:, :, 1]) / diagonal

    det_yaw = np.array([d.pose.yaw for d in detections], dtype=float).reshape(n)
    cand_yaw = np.array([c.pose.yaw for c in candidates], dtype=float).reshape(m)
    delta = np.abs(det_yaw[:, None] - cand_yaw[None, :])
    c_r = np.sin(delta * (np.pi / 360.0))

    det_dims = np.array([[d.dims.w, d.dims.h, d.dims.d] for d in detections], dtype=float).reshape(n, 3)
    cand_dims = np.array([[c.dims.w, c.dims.h, c.dims.d] for c in candidates], dtype=float).reshape(m, 3)
    c_d = np.full((n, m), np.inf)
    for perm in _DIM_PERMUTATIONS:
        ratio = det_dims[:, None, list(perm)] / cand_dims[None, :, :]
        prod = np.prod(np.maximum(ratio, 1.0 / ratio), axis=2)
        np.minimum(c_d, prod, out=c_d)
    c_d = c_d.reshape(n, m)

    total = c_d * (weights.w_t * c_t + weights.w_r * c_r)
    return CostMatrix(
        candidates=labels,
        candidate_types=tuple(c.object_type for c in candidates),
        detection_types=tuple(d.object_type for d in detections),
        c_t=c_t,
        c_r=c_r,
        c_d=c_d,
        total=total,
    )
