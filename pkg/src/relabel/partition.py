"""Voronoi site partition and probability-driven site pruning.

The scene is partitioned by a set of point sites: every position belongs to
its nearest site (ties break toward the lexicographically smallest site id).
Given a camera position, each remaining site gets a likelihood-style weight
from the reciprocal of its distance; the containing site always gets
probability 1 and the rest share normalized reciprocal weights.  A threshold
in [0, 1] keeps the containing site plus the most probable others until
their cumulative probability first reaches the threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .scene import CameraState, ObjectInstance, SceneLayout

__all__ = [
    "VoronoiSite",
    "SiteEntry",
    "SiteProbabilities",
    "PartitionError",
    "validate_threshold",
    "site_distances",
    "containing_site",
    "site_probabilities",
    "prune_sites",
    "candidate_labels",
]


class PartitionError(ValueError):
    """Invalid partition input: no sites, duplicate ids, bad threshold."""


@dataclass(frozen=True, slots=True)
class VoronoiSite:
    """A named partition site: all positions nearer to it than to any other
    site form its cell."""

    id: str
    center: tuple[float, float]

    def __post_init__(self) -> None:
        if not self.id:
            raise PartitionError("site id must be a non-empty string")
        x, z = self.center
        x, z = float(x), float(z)
        if not (math.isfinite(x) and math.isfinite(z)):
            raise PartitionError(f"site '{self.id}' center must be finite, got ({x}, {z})")
        object.__setattr__(self, "center", (x, z))

    def distance_to(self, position: tuple[float, float]) -> float:
        return math.hypot(position[0] - self.center[0], position[1] - self.center[1])


@dataclass(frozen=True, slots=True)
class SiteEntry:
    """One non-containing site's score for a camera position."""

    site_id: str
    distance: float
    probability: float
    cumulative: float


@dataclass(frozen=True, slots=True)
class SiteProbabilities:
    """All sites ranked for one camera position.

    The containing site carries probability 1 by definition and is kept out
    of `entries`; the non-containing entries are sorted by descending
    probability (ties by ascending site id), sum to 1, and carry running
    cumulative sums.  A single-site scene has no entries at all.
    """

    containing_site: str
    containing_distance: float
    entries: tuple[SiteEntry, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        if not self.containing_site:
            raise PartitionError("containing site id must be non-empty")
        if self.entries:
            total = sum(e.probability for e in self.entries)
            if abs(total - 1.0) > 1e-9:
                raise PartitionError(f"non-containing probabilities must sum to 1, got {total}")
            if abs(self.entries[-1].cumulative - 1.0) > 1e-9:
                raise PartitionError("cumulative sums must end at 1")
            running = 0.0
            for prev, entry in zip((None, *self.entries), self.entries):
                if prev is not None and entry.probability > prev.probability + 1e-12:
                    raise PartitionError("entries must be sorted by descending probability")
                running += entry.probability
                if abs(entry.cumulative - running) > 1e-9:
                    raise PartitionError("cumulative must be the running probability sum")

    def site_count(self) -> int:
        return 1 + len(self.entries)


def validate_threshold(threshold: float) -> float:
    threshold = float(threshold)
    if not math.isfinite(threshold) or not 0.0 <= threshold <= 1.0:
        raise PartitionError(f"prune threshold must lie in [0, 1], got {threshold}")
    return threshold


def _position_of(camera: CameraState | tuple[float, float]) -> tuple[float, float]:
    # accept a camera or a bare (x, z) pair; only the position matters here
    pos = getattr(camera, "position", camera)
    return float(pos[0]), float(pos[1])


def _check_sites(sites: tuple[VoronoiSite, ...]) -> tuple[VoronoiSite, ...]:
    sites = tuple(sites)
    if not sites:
        raise PartitionError("site set must not be empty")
    ids = [s.id for s in sites]
    if len(set(ids)) != len(ids):
        raise PartitionError("site ids must be unique")
    return sites


def site_distances(
    camera: CameraState | tuple[float, float], sites: tuple[VoronoiSite, ...]
) -> tuple[tuple[str, float], ...]:
    """Planar distance from the camera to every site center, in site order."""
    position = _position_of(camera)
    return tuple((s.id, s.distance_to(position)) for s in _check_sites(sites))


def containing_site(
    camera: CameraState | tuple[float, float], sites: tuple[VoronoiSite, ...]
) -> str:
    """Id of the nearest site; distance ties break toward the smallest id."""
    position = _position_of(camera)
    return min(_check_sites(sites), key=lambda s: (s.distance_to(position), s.id)).id


def site_probabilities(
    camera: CameraState | tuple[float, float], sites: tuple[VoronoiSite, ...]
) -> SiteProbabilities:
    """Rank every site for the camera position by reciprocal-distance weight.

    Each non-containing site k at distance D_k gets (1/D_k) / sum_t (1/D_t),
    normalized over the non-containing sites only.  A non-containing site at
    distance 0 (guarded; the containing tie-break normally consumes it) takes
    the full remaining mass, split equally if several tie at 0.
    """
    sites = _check_sites(sites)
    position = _position_of(camera)
    inside = min(sites, key=lambda s: (s.distance_to(position), s.id))
    others = [s for s in sites if s.id != inside.id]
    ranked: list[SiteEntry] = []
    if others:
        dists = [s.distance_to(position) for s in others]
        zero = [d < 1e-300 for d in dists]
        if any(zero):
            n_zero = sum(zero)
            probs = [1.0 / n_zero if z else 0.0 for z in zero]
        else:
            inv = [1.0 / d for d in dists]
            total = sum(inv)
            probs = [v / total for v in inv]
        order = sorted(zip(others, dists, probs), key=lambda t: (-t[2], t[0].id))
        cumulative = 0.0
        for site, dist, prob in order:
            cumulative += prob
            ranked.append(
                SiteEntry(site_id=site.id, distance=dist, probability=prob, cumulative=cumulative)
            )
    return SiteProbabilities(
        containing_site=inside.id,
        containing_distance=inside.distance_to(position),
        entries=tuple(ranked),
    )


def prune_sites(probabilities: SiteProbabilities, threshold: float) -> set[str]:
    """Site ids to keep: the containing site, plus (for threshold > 0) the
    top-ranked others through the first whose cumulative probability reaches
    the threshold.  Threshold 1 keeps every site."""
    threshold = validate_threshold(threshold)
    kept = {probabilities.containing_site}
    if threshold == 0.0:
        return kept
    if threshold == 1.0:
        # unconditional, so a zero-probability entry cannot be orphaned
        kept.update(e.site_id for e in probabilities.entries)
        return kept
    for entry in probabilities.entries:
        kept.add(entry.site_id)
        if entry.cumulative >= threshold - 1e-12:
            break
    return kept


def candidate_labels(layout: SceneLayout, selected_sites: set[str]) -> tuple[ObjectInstance, ...]:
    """Initial-layout objects whose position falls in a selected site's cell.

    Membership always uses the layout's full site set, so pruning never
    reassigns an object to a different cell.  Result is sorted by label.
    """
    if not selected_sites:
        raise PartitionError("selected site set must not be empty")
    unknown = set(selected_sites) - {s.id for s in layout.sites}
    if unknown:
        raise PartitionError(f"unknown site ids: {sorted(unknown)}")
    chosen = [
        o
        for o in layout.objects
        if containing_site((o.pose.x, o.pose.z), layout.sites) in selected_sites
    ]
    return tuple(sorted(chosen, key=lambda o: o.label))
