"""Unit tests for windows, regions, boundaries and buffers."""

import itertools

import pytest

from entanglab.core.errors import RegionError
from entanglab.models import Region, Tripartition, Window
from entanglab.physics.lattice import boundary, buffer, end_block, region_distance, regularity_check, split_buffer


def brute_force_buffer(a: Region, l: int) -> set[int]:
    window = a.window
    return {
        v
        for v in range(window.site_count)
        if v not in a and min(window.distance(u, v) for u in a) <= l
    }


class TestWindow:
    """Test window construction and site enumeration."""

    def test_row_major_enumeration(self):
        """Test that the last coordinate varies fastest."""
        window = Window((3, 4))

        assert window.site_count == 12
        assert window.coords(0) == (0, 0)
        assert window.coords(1) == (0, 1)
        assert window.coords(4) == (1, 0)
        assert window.index((2, 3)) == 11

    def test_neighbors_open_boundary(self):
        """Test that corner sites have only in-window neighbors."""
        window = Window((3, 3))

        assert window.neighbors(0) == [1, 3]
        assert window.neighbors(4) == [1, 3, 5, 7]

    def test_distance_is_l1(self):
        """Test graph distance on a 3D box."""
        window = Window((2, 3, 4))

        assert window.distance(window.index((0, 0, 0)), window.index((1, 2, 3))) == 6

    @pytest.mark.parametrize("dims", [(), (2, 2, 2, 2), (0, 3)])
    def test_invalid_dims(self, dims):
        """Test that dimension and edge-length limits are enforced."""
        with pytest.raises(RegionError):
            Window(dims)

    def test_box_region(self):
        """Test inclusive coordinate boxes."""
        window = Window((4, 4))
        region = window.box([1, 1], [2, 2])

        assert region.sites == (5, 6, 9, 10)

    def test_box_out_of_window(self):
        """Test that a box corner outside the window is rejected."""
        with pytest.raises(RegionError):
            Window((4, 4)).box([0, 0], [4, 1])


class TestRegion:
    """Test region set semantics."""

    def test_sites_sorted(self, chain20):
        """Test that sites are stored sorted."""
        assert Region(chain20, (7, 3, 5)).sites == (3, 5, 7)

    def test_duplicates_rejected(self, chain20):
        """Test that duplicate sites are rejected."""
        with pytest.raises(RegionError):
            Region(chain20, (1, 1))

    def test_site_outside_window(self, chain20):
        """Test that sites beyond the window are rejected."""
        with pytest.raises(RegionError):
            Region(chain20, (20,))

    def test_set_operations(self, chain20):
        """Test union, difference, intersection and complement."""
        first = Region(chain20, (1, 2, 3))
        second = Region(chain20, (3, 4))

        assert (first | second).sites == (1, 2, 3, 4)
        assert (first - second).sites == (1, 2)
        assert (first & second).sites == (3,)
        assert len(first.complement()) == 17
        assert not first.isdisjoint(second)

    def test_empty_region(self, chain20):
        """Test that empty regions are allowed."""
        assert Region(chain20).is_empty()

    def test_different_windows(self):
        """Test that regions of different windows do not mix."""
        with pytest.raises(RegionError):
            Region(Window((3,)), (0,)) | Region(Window((4,)), (0,))

    def test_tripartition_overlap(self, chain20):
        """Test that overlapping tripartition parts are rejected."""
        with pytest.raises(RegionError):
            Tripartition(Region(chain20, (1,)), Region(chain20, (1, 2)), Region(chain20))


class TestBoundary:
    """Test the inner boundary of a region."""

    def test_interval(self, chain20):
        """Test the boundary of an interior interval."""
        assert boundary(Region(chain20, range(5, 9))).sites == (5, 8)

    def test_full_window(self, chain20):
        """Test that the whole window has no boundary."""
        assert boundary(chain20.everything).is_empty()

    def test_corner_block(self):
        """Test a corner 2x2 block of a 4x4 window against a neighbor scan."""
        window = Window((4, 4))
        a = window.box([0, 0], [1, 1])
        scanned = {u for u in a for v in range(16) if v not in a and window.distance(u, v) == 1}

        assert set(boundary(a).sites) == scanned == set(a.sites)

    def test_empty_region(self, chain20):
        """Test that the boundary of an empty region is an error."""
        with pytest.raises(RegionError, match="empty region"):
            boundary(Region(chain20))

    def test_every_boundary_site_touches_outside(self):
        """Test boundary membership exhaustively on a 4x4 window for many regions."""
        window = Window((4, 4))
        for lo, hi in itertools.product(itertools.product(range(4), repeat=2), repeat=2):
            if lo[0] > hi[0] or lo[1] > hi[1]:
                continue
            a = window.box(lo, hi)
            found = boundary(a)
            assert found <= a
            for u in a:
                touches = any(v not in a for v in window.neighbors(u))
                assert (u in found) == touches


class TestBuffer:
    """Test buffer tripartitions."""

    def test_interval(self, chain20):
        """Test the width-2 buffer of an interval."""
        tri = buffer(Region(chain20, range(5, 9)), 2)

        assert tri.b.sites == (3, 4, 9, 10)
        assert len(tri.c) == 12
        assert tri.covers_window()

    def test_exhausting_width(self, chain20):
        """Test that a buffer as wide as the window leaves C empty."""
        tri = buffer(Region(chain20, (0,)), 19)

        assert tri.c.is_empty()

    def test_central_block_square(self):
        """Test the width-1 buffer of a central 2x2 block against a distance scan."""
        window = Window((6, 6))
        a = window.box([2, 2], [3, 3])
        tri = buffer(a, 1)

        assert set(tri.b.sites) == brute_force_buffer(a, 1)
        assert len(tri.b) == 8
        assert len(buffer(a, 2).b) == 20

    def test_width_zero(self, chain20):
        """Test that the width must be positive."""
        with pytest.raises(RegionError):
            buffer(Region(chain20, (3,)), 0)

    def test_tiling_and_monotonicity(self):
        """Test that parts tile the window and buffers grow with the width."""
        window = Window((5, 5))
        for a in (window.box([0, 0], [0, 0]), window.box([1, 1], [2, 3]), window.box([2, 0], [2, 4])):
            previous = None
            for l in range(1, 6):
                tri = buffer(a, l)
                assert tri.covers_window()
                assert set(tri.b.sites) == brute_force_buffer(a, l)
                if previous is not None:
                    assert previous.b <= tri.b
                    assert tri.c <= previous.c
                previous = tri


class TestSplitBuffer:
    """Test disjoint buffers around two regions."""

    def test_chain_ends(self, chain20):
        """Test buffers of the two ends of a chain."""
        b1, b2, c = split_buffer(Region(chain20, (0, 1)), Region(chain20, (18, 19)), 3)

        assert b1.sites == (2, 3, 4)
        assert b2.sites == (15, 16, 17)
        assert c.sites == tuple(range(5, 15))

    def test_distance_exactly_three_widths(self, chain20):
        """Test that d(A1, A2) = 3l is accepted."""
        a1, a2 = Region(chain20, (0,)), Region(chain20, (9,))
        b1, b2, _ = split_buffer(a1, a2, 3)

        assert region_distance(a1, a2) == 9
        assert b1.isdisjoint(b2)

    def test_distance_too_small(self, chain20):
        """Test that d(A1, A2) = 3l - 1 is rejected."""
        with pytest.raises(RegionError, match="buffers overlap"):
            split_buffer(Region(chain20, (0,)), Region(chain20, (8,)), 3)


class TestRegularity:
    """Test the measured regularity constants."""

    def test_interior_interval(self, chain20):
        """Test that an interior interval has c_d = C_d = 1."""
        report = regularity_check(Region(chain20, range(5, 9)))

        assert report.boundary_size == 2
        assert report.c_d == report.C_d == 1.0
        assert report.length_scale == 2.0
        assert report.is_regular

    def test_single_site(self, chain20):
        """Test a single interior site: |dA| = 1 and |B_l| = 2l."""
        report = regularity_check(Region(chain20, (10,)))

        assert report.boundary_size == 1
        assert report.C_d == 2.0

    def test_square_block(self):
        """Test a centered 4x4 block of an 8x8 window against brute-force counts."""
        window = Window((8, 8))
        a = window.box([2, 2], [5, 5])
        report = regularity_check(a)
        ratios = [len(brute_force_buffer(a, l)) / (l * 12) for l in report.widths]

        assert report.boundary_size == 12
        assert report.c_d == pytest.approx(min(ratios))
        assert report.C_d == pytest.approx(max(ratios))
        assert report.c_d <= report.C_d

    def test_full_window(self, chain20):
        """Test that the whole window is rejected."""
        with pytest.raises(RegionError):
            regularity_check(chain20.everything)


class TestEndBlock:
    """Test end blocks of chains."""

    def test_end_block(self, chain20):
        """Test the first sites of a chain."""
        assert end_block(chain20, 3).sites == (0, 1, 2)

    def test_two_dimensional_window(self):
        """Test that end blocks need a chain."""
        with pytest.raises(RegionError):
            end_block(Window((2, 2)), 1)
