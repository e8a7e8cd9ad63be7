import numpy as np
import pytest

from smoothfill.grid import (
    CellKind,
    CollarError,
    build_grid,
    classify_mask,
    classify_rect_hole,
    outward_direction,
    stencil_data_points,
)


class TestBuildGrid:
    def test_reference_domain(self):
        grid = build_grid((-1, 1, -1, 1), 50)
        assert grid.h == 2.0 / 50
        assert grid.h == pytest.approx(0.04, rel=1e-12)
        assert grid.shape == (51, 51)

    def test_smallest_legal_grid(self):
        grid = build_grid((0, 1, 0, 1), 2)
        assert grid.h == 0.5
        assert grid.shape == (3, 3)
        assert (grid.n + 1) ** 2 == 9

    def test_quarter_domain(self):
        grid = build_grid((-0.25, 0.25, -0.25, 0.25), 50)
        assert grid.h == 0.5 / 50
        assert grid.h == pytest.approx(0.01, rel=1e-12)

    def test_point_coordinates(self):
        grid = build_grid((-1, 1, -1, 1), 4)
        assert grid.xy(0, 0) == (-1.0, -1.0)
        assert grid.xy(4, 4) == (1.0, 1.0)
        assert grid.xy(2, 1) == (-0.5, 0.0)

    @pytest.mark.parametrize("rect", [(0, 2, 0, 1), (0, 1, 0, 2), (1, 0, 0, 1)])
    def test_rejects_bad_rectangles(self, rect):
        with pytest.raises(ValueError):
            build_grid(rect, 4)

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            build_grid((0, 1, 0, 1), 1)


class TestClassifyRectHole:
    def test_single_interior_point(self):
        cls = classify_rect_hole(build_grid((0, 1, 0, 1), 2))
        assert cls.n_unknown == 1
        assert cls.n_boundary == 8

    def test_counts_n4(self):
        cls = classify_rect_hole(build_grid((0, 1, 0, 1), 4))
        assert cls.n_unknown == 9
        assert cls.n_boundary == 16

    def test_counts_n50(self):
        cls = classify_rect_hole(build_grid((-1, 1, -1, 1), 50))
        assert cls.n_unknown == 49**2 == 2401

    @pytest.mark.parametrize("n", [2, 3, 5, 8, 12])
    def test_unknown_count_formula(self, n):
        cls = classify_rect_hole(build_grid((0, 1, 0, 1), n))
        assert cls.n_unknown == (n - 1) ** 2

    @pytest.mark.parametrize("n", [2, 4, 7])
    def test_neighbour_invariants(self, n):
        cls = classify_rect_hole(build_grid((0, 1, 0, 1), n))
        unknown = cls.unknown_mask()
        for r, c in np.argwhere(unknown):
            for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                rr, cc = r + dr, c + dc
                assert cls.on_lattice(rr, cc)
                assert cls.kinds[rr, cc] in (CellKind.UNKNOWN_INTERIOR, CellKind.BOUNDARY)

    def test_rings_recomputed_naively(self):
        cls = classify_rect_hole(build_grid((0, 1, 0, 1), 5))
        unknown = cls.unknown_mask()
        nr, nc = cls.shape
        for r in range(nr):
            for c in range(nc):
                if unknown[r, c]:
                    continue
                near1 = any(
                    0 <= r + dr < nr and 0 <= c + dc < nc and unknown[r + dr, c + dc]
                    for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1))
                )
                near2 = any(
                    0 <= r + dr < nr and 0 <= c + dc < nc and unknown[r + dr, c + dc]
                    for dr, dc in ((2, 0), (-2, 0), (0, 2), (0, -2))
                )
                assert cls.ring1[r, c] == near1
                assert cls.ring2[r, c] == near2


class TestIndexMap:
    def test_roundtrip_identity(self):
        cls = classify_rect_hole(build_grid((0, 1, 0, 1), 6))
        for k in range(cls.n_unknown):
            r, c = cls.index.point_of(k)
            assert cls.index.index_of(r, c) == k

    def test_row_major_order(self):
        cls = classify_rect_hole(build_grid((0, 1, 0, 1), 5))
        pts = [tuple(p) for p in cls.index.points]
        assert pts == sorted(pts)

    def test_known_point_rejected(self):
        cls = classify_rect_hole(build_grid((0, 1, 0, 1), 4))
        with pytest.raises(KeyError):
            cls.index.index_of(0, 0)


class TestClassifyMask:
    def test_empty_mask(self):
        cls = classify_mask(8, 6, np.zeros((6, 8), dtype=bool))
        assert cls.n_unknown == 0
        assert cls.n_boundary == 0

    def test_single_missing_pixel(self):
        mask = np.zeros((11, 11), dtype=bool)
        mask[5, 5] = True
        cls = classify_mask(11, 11, mask)
        assert cls.n_unknown == 1
        assert cls.n_boundary == 8
        ring1 = {tuple(p) for p in np.argwhere(cls.ring1)}
        ring2 = {tuple(p) for p in np.argwhere(cls.ring2)}
        assert ring1 == {(4, 5), (6, 5), (5, 4), (5, 6)}
        assert ring2 == {(3, 5), (7, 5), (5, 3), (5, 7)}
        # diagonal neighbours stay exterior
        assert cls.kinds[4, 4] == CellKind.KNOWN_EXTERIOR

    @pytest.mark.parametrize("pixel", [(0, 3), (1, 5), (9, 5), (5, 10)])
    def test_collar_violations(self, pixel):
        mask = np.zeros((11, 11), dtype=bool)
        mask[pixel] = True
        with pytest.raises(CollarError):
            classify_mask(11, 11, mask)

    def test_mask_shape_mismatch(self):
        with pytest.raises(ValueError):
            classify_mask(5, 4, np.zeros((5, 5), dtype=bool))

    def test_full_rect_hole_equivalence(self):
        # a 5x5 missing block inside an 11x11 image, against the n=6 square hole
        n = 6
        rect_cls = classify_rect_hole(build_grid((0, 1, 0, 1), n))
        mask = np.zeros((11, 11), dtype=bool)
        mask[3:8, 3:8] = True
        mask_cls = classify_mask(11, 11, mask)
        off = 2  # rect lattice (0,0) maps to image pixel (2,2)
        rect_unknown = {tuple(p) for p in np.argwhere(rect_cls.unknown_mask())}
        mask_unknown = {tuple(p) for p in np.argwhere(mask_cls.unknown_mask())}
        assert mask_unknown == {(r + off, c + off) for r, c in rect_unknown}
        rect_ring1 = {tuple(p) for p in np.argwhere(rect_cls.ring1)}
        mask_ring1 = {tuple(p) for p in np.argwhere(mask_cls.ring1)}
        assert mask_ring1 == {(r + off, c + off) for r, c in rect_ring1}


class TestOutwardDirection:
    def test_rect_hole_edges(self):
        cls = classify_rect_hole(build_grid((0, 1, 0, 1), 4))
        assert outward_direction(cls, 0, 2) == (-1, 0)
        assert outward_direction(cls, 4, 2) == (1, 0)
        assert outward_direction(cls, 2, 0) == (0, -1)
        assert outward_direction(cls, 2, 4) == (0, 1)

    def test_corner_is_ambiguous(self):
        cls = classify_rect_hole(build_grid((0, 1, 0, 1), 4))
        assert outward_direction(cls, 0, 0) is None


class TestStencilDataPoints:
    def test_rect_hole_support_is_whole_edge(self):
        cls = classify_rect_hole(build_grid((0, 1, 0, 1), 4))
        support = stencil_data_points(cls)
        edge = {
            (r, c)
            for r in range(5)
            for c in range(5)
            if r in (0, 4) or c in (0, 4)
        }
        assert support == edge

    def test_single_pixel_support(self):
        mask = np.zeros((11, 11), dtype=bool)
        mask[5, 5] = True
        support = stencil_data_points(classify_mask(11, 11, mask))
        assert len(support) == 12  # 4 ring-1 + 4 ring-2 + 4 diagonal
        assert (4, 4) in support
