"""Distance-weighted site partition: probabilities, pruning, candidates."""

from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from relabel.partition import (
    PartitionError,
    VoronoiSite,
    candidate_labels,
    containing_site,
    prune_sites,
    site_distances,
    site_probabilities,
    validate_threshold,
)
from relabel.scene import CameraState


def sites_at(*centers: tuple[float, float]) -> tuple[VoronoiSite, ...]:
    return tuple(VoronoiSite(id=f"S{i + 1:02d}", center=c) for i, c in enumerate(centers))


def camera_at(x: float, z: float) -> CameraState:
    return CameraState(position=(x, z), yaw=0.0)


class TestDistances:
    def test_three_four_five(self):
        sites = sites_at((3.0, 0.0), (0.0, 4.0), (3.0, 4.0))
        dists = dict(site_distances(camera_at(0.0, 0.0), sites))
        assert dists == {"S01": 3.0, "S02": 4.0, "S03": 5.0}

    def test_accepts_bare_position(self):
        sites = sites_at((1.0, 0.0),)
        assert site_distances((0.0, 0.0), sites)[0][1] == 1.0

    def test_empty_sites_rejected(self):
        with pytest.raises(PartitionError):
            site_distances(camera_at(0, 0), ())


class TestContainingSite:
    def test_nearest_wins(self):
        sites = sites_at((0.0, 0.0), (10.0, 0.0))
        assert containing_site(camera_at(2.0, 0.0), sites) == "S01"
        assert containing_site(camera_at(8.0, 0.0), sites) == "S02"

    def test_tie_goes_to_smallest_id(self):
        sites = sites_at((0.0, 0.0), (10.0, 0.0))
        assert containing_site(camera_at(5.0, 0.0), sites) == "S01"


class TestProbabilities:
    def test_reciprocal_distance_two_sites(self):
        # distances 1 and 3 from the two non-containing sites:
        # weights 1 and 1/3 normalize to 0.75 and 0.25
        sites = sites_at((0.0, 0.0), (1.0, 0.0), (-3.0, 0.0))
        sp = site_probabilities(camera_at(0.0, 0.0), sites)
        assert sp.containing_site == "S01"
        assert sp.containing_distance == 0.0
        assert [e.site_id for e in sp.entries] == ["S02", "S03"]
        assert sp.entries[0].probability == pytest.approx(0.75, abs=1e-12)
        assert sp.entries[1].probability == pytest.approx(0.25, abs=1e-12)
        assert sp.entries[0].cumulative == pytest.approx(0.75, abs=1e-12)
        assert sp.entries[1].cumulative == pytest.approx(1.0, abs=1e-12)

    def test_containing_site_excluded_from_entries(self):
        sites = sites_at((0.0, 0.0), (2.0, 0.0))
        sp = site_probabilities(camera_at(0.5, 0.0), sites)
        assert sp.containing_site == "S01"
        assert [e.site_id for e in sp.entries] == ["S02"]
        assert sp.entries[0].probability == 1.0

    def test_single_site_has_no_entries(self):
        sp = site_probabilities(camera_at(3.0, 3.0), sites_at((0.0, 0.0)))
        assert sp.containing_site == "S01" and sp.entries == ()

    def test_entries_sorted_descending_probability(self):
        sites = sites_at((0.0, 0.0), (5.0, 0.0), (2.0, 0.0), (9.0, 0.0))
        sp = site_probabilities(camera_at(0.1, 0.0), sites)
        probs = [e.probability for e in sp.entries]
        assert probs == sorted(probs, reverse=True)
        assert sp.entries[0].site_id == "S03"  # nearest non-containing

    def test_equal_probability_ties_order_by_id(self):
        sites = sites_at((0.0, 0.0), (4.0, 0.0), (-4.0, 0.0))
        sp = site_probabilities(camera_at(0.0, 0.0), sites)
        assert [e.site_id for e in sp.entries] == ["S02", "S03"]

    def test_zero_distance_non_containing_takes_all_mass(self):
        # camera exactly on S02's center while S01 contains by id tie-break
        sites = sites_at((0.0, 0.0), (0.0, 0.0), (5.0, 0.0))
        sp = site_probabilities(camera_at(0.0, 0.0), sites)
        assert sp.containing_site == "S01"
        assert sp.entries[0].site_id == "S02"
        assert sp.entries[0].probability == 1.0
        assert sp.entries[1].probability == 0.0

    @given(
        st.lists(
            st.tuples(
                st.floats(min_value=-50, max_value=50),
                st.floats(min_value=-50, max_value=50),
            ),
            min_size=2,
            max_size=8,
            unique=True,
        ),
        st.floats(min_value=-50, max_value=50),
        st.floats(min_value=-50, max_value=50),
    )
    def test_probability_invariants(self, centers, x, z):
        sp = site_probabilities(camera_at(x, z), sites_at(*centers))
        assert math.isclose(sum(e.probability for e in sp.entries), 1.0, abs_tol=1e-9)
        assert math.isclose(sp.entries[-1].cumulative, 1.0, abs_tol=1e-9)
        running = 0.0
        for e in sp.entries:
            running += e.probability
            assert math.isclose(e.cumulative, running, abs_tol=1e-9)


class TestPruning:
    @pytest.fixture
    def spread(self):
        sites = sites_at((0.0, 0.0), (1.0, 0.0), (3.0, 0.0), (6.0, 0.0))
        return site_probabilities(camera_at(0.0, 0.0), sites)

    def test_zero_keeps_only_containing(self, spread):
        assert prune_sites(spread, 0.0) == {"S01"}

    def test_one_keeps_everything(self, spread):
        assert prune_sites(spread, 1.0) == {"S01", "S02", "S03", "S04"}

    def test_cut_at_first_cumulative_reaching_threshold(self, spread):
        # entry probabilities: 2/3, 2/9, 1/9 -> cumulatives 0.667, 0.889, 1.0
        assert prune_sites(spread, 0.5) == {"S01", "S02"}
        assert prune_sites(spread, 0.7) == {"S01", "S02", "S03"}
        assert prune_sites(spread, 0.95) == {"S01", "S02", "S03", "S04"}

    def test_threshold_exactly_on_cumulative(self, spread):
        assert prune_sites(spread, 2.0 / 3.0) == {"S01", "S02"}

    def test_bad_threshold_rejected(self, spread):
        for t in (-0.1, 1.1, math.nan):
            with pytest.raises(PartitionError):
                prune_sites(spread, t)
        with pytest.raises(PartitionError):
            validate_threshold(2.0)

    @given(st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=0.0, max_value=1.0))
    def test_monotone_in_threshold(self, t1, t2):
        sites = sites_at((0.0, 0.0), (1.0, 1.0), (4.0, 0.0), (0.0, 7.0), (9.0, 9.0))
        sp = site_probabilities(camera_at(2.0, 2.0), sites)
        lo, hi = sorted((t1, t2))
        assert prune_sites(sp, lo) <= prune_sites(sp, hi)


class TestCandidateLabels:
    def test_objects_follow_their_nearest_site(self, two_site_layout):
        west = candidate_labels(two_site_layout, {"S01"})
        east = candidate_labels(two_site_layout, {"S02"})
        assert [o.label for o in west] == ["chair-01", "chair-02"]
        assert [o.label for o in east] == ["chair-03", "chair-04"]

    def test_union_is_label_sorted(self, two_site_layout):
        both = candidate_labels(two_site_layout, {"S02", "S01"})
        assert [o.label for o in both] == ["chair-01", "chair-02", "chair-03", "chair-04"]

    def test_unknown_site_rejected(self, two_site_layout):
        with pytest.raises(PartitionError, match="S99"):
            candidate_labels(two_site_layout, {"S99"})

    def test_empty_selection_rejected(self, two_site_layout):
        with pytest.raises(PartitionError):
            candidate_labels(two_site_layout, set())
