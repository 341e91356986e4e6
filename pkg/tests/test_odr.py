import math

import numpy as np
import pytest

import lidarplace as lp

ROI = lp.RoiSpec(extent=[8, 8, 4], resolution=[1, 1, 1])
MODEL = lp.LidarModel(beam_pitches=[math.radians(-15), math.radians(15)])
POSE = lp.PoseConfig(position=[4.0, 4.0, 3.0])


def labeled_grid():
    grid = lp.build_voxel_grid(ROI)
    labels = lp.first_level_labels([POSE], [MODEL], grid)
    comp, count = lp.component_ids(labels, grid)
    return grid, comp, count


class TestObjectSpec:
    def test_requires_positive_dims(self):
        with pytest.raises(ValueError):
            lp.ObjectSpec(dims=[0.0, 1.0, 1.0])

    def test_default_region_keeps_object_inside(self):
        region = lp.ObjectSpec(dims=[2, 2, 2]).corner_region([8, 8, 4])
        assert region.minimum.tolist() == [0, 0, 0]
        assert region.maximum.tolist() == [6, 6, 2]

    def test_oversized_object_rejected(self):
        with pytest.raises(ValueError):
            lp.ObjectSpec(dims=[9, 1, 1]).corner_region([8, 8, 4])

    def test_custom_region_validated(self):
        spec = lp.ObjectSpec(
            dims=[2, 2, 2], placement_region=lp.Box(minimum=[0, 0, 0], maximum=[7, 6, 2])
        )
        with pytest.raises(ValueError):
            spec.corner_region([8, 8, 4])


class TestCountOccupiedSubspaces:
    def test_box_inside_single_voxel(self):
        grid, comp, _ = labeled_grid()
        # strictly inside voxel (0, 0, 0), wrapped around its center
        box = lp.Box(minimum=[0.3, 0.3, 0.3], maximum=[0.7, 0.7, 0.7])
        assert lp.count_occupied_subspaces(box, comp, grid) == 1

    def test_box_covering_roi_sees_every_component(self):
        grid, comp, count = labeled_grid()
        box = lp.Box(minimum=[0, 0, 0], maximum=[8, 8, 4])
        assert lp.count_occupied_subspaces(box, comp, grid) == count

    def test_box_between_centers_sees_nothing(self):
        grid, comp, _ = labeled_grid()
        box = lp.Box(minimum=[0.6, 0.6, 0.6], maximum=[0.9, 0.9, 0.9])
        assert lp.count_occupied_subspaces(box, comp, grid) == 0

    def test_matches_containment_scan(self):
        grid, comp, _ = labeled_grid()
        rng = np.random.default_rng(51)
        for _ in range(50):
            lo = rng.uniform(0, [6, 6, 2])
            hi = lo + rng.uniform(0.5, 2.0, 3)
            box = lp.Box(minimum=lo, maximum=hi)
            expected = set()
            for row in range(grid.num_active):
                c = grid.active_centers[row]
                if np.all(c >= lo) and np.all(c <= hi):
                    expected.add(int(comp[row]))
            assert lp.count_occupied_subspaces(box, comp, grid) == len(expected)


class TestEstimateOdr:
    def test_threshold_zero_with_full_coverage(self):
        obj = lp.ObjectSpec(dims=[2, 2, 2])
        report = lp.estimate_odr(
            [POSE], [MODEL], ROI, obj, 200, 0, np.random.default_rng(52)
        )
        assert report.odr == 1.0
        assert report.detections == report.trials == 200

    def test_threshold_at_component_count_gives_zero(self):
        _, _, count = labeled_grid()
        obj = lp.ObjectSpec(dims=[2, 2, 2])
        report = lp.estimate_odr(
            [POSE], [MODEL], ROI, obj, 200, count, np.random.default_rng(53)
        )
        assert report.odr == 0.0

    def test_monotone_in_threshold(self):
        obj = lp.ObjectSpec(dims=[2, 2, 2])
        rates = [
            lp.estimate_odr(
                [POSE], [MODEL], ROI, obj, 300, thr, np.random.default_rng(54)
            ).odr
            for thr in range(0, 4)
        ]
        assert all(a >= b for a, b in zip(rates, rates[1:]))
        assert all(0.0 <= r <= 1.0 for r in rates)

    def test_deterministic_for_fixed_seed(self):
        obj = lp.ObjectSpec(dims=[1.5, 1.5, 1.5])
        a = lp.estimate_odr([POSE], [MODEL], ROI, obj, 250, 1, np.random.default_rng(55))
        b = lp.estimate_odr([POSE], [MODEL], ROI, obj, 250, 1, np.random.default_rng(55))
        assert a == b

    def test_report_invariants(self):
        obj = lp.ObjectSpec(dims=[2, 2, 2])
        report = lp.estimate_odr(
            [POSE], [MODEL], ROI, obj, 123, 1, np.random.default_rng(56)
        )
        assert report.detections <= report.trials
        assert report.odr == report.detections / report.trials

    def test_bad_arguments_rejected(self):
        obj = lp.ObjectSpec(dims=[1, 1, 1])
        with pytest.raises(ValueError):
            lp.estimate_odr([POSE], [MODEL], ROI, obj, 0, 1, np.random.default_rng(0))
        with pytest.raises(ValueError):
            lp.estimate_odr([POSE], [MODEL], ROI, obj, 10, -1, np.random.default_rng(0))
