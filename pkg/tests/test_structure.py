"""Line decompositions: fibers, direction scan, cutoff, grid profiles."""

import pytest

from sumsets import (
    Direction,
    LinearMap,
    PointSet,
    best_direction,
    decomposition_to_text,
    fibers_along,
    gen_an,
    gen_bn,
    gen_cn,
    gen_random_box,
    grid_profile,
    grid_profile_to_text,
    sqrt_cutoff_decompose,
    verify_decomposition,
)
from sumsets.structure import Fiber, LineDecomposition

ROT90 = LinearMap.rotation90()
RATROT = LinearMap.from_string("3/5,-4/5;4/5,3/5")


class TestDirection:
    def test_canonicalisation(self):
        assert Direction.of((2, 4)).vector == (1, 2)
        assert Direction.of((-3, 6)).vector == (1, -2)
        assert Direction.of(("1/2", "1/3")).vector == (3, 2)
        assert Direction.of((0, -5)).vector == (0, 1)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            Direction.of((0, 0))

    def test_non_canonical_rejected(self):
        with pytest.raises(ValueError):
            Direction((2, 4))
        with pytest.raises(ValueError):
            Direction((-1, 0))

    def test_colex_orders_the_basis(self):
        e1, e2 = Direction((1, 0)), Direction((0, 1))
        assert e1.sort_key() < e2.sort_key()


class TestFibersAlong:
    def test_grid_rows(self):
        dec = fibers_along(gen_bn(3), (1, 0))
        assert [len(f.members) for f in dec.fibers] == [3, 3, 3]
        assert dec.r_selected == 3
        assert len(dec.leftover) == 0

    def test_collinear_single_fiber(self):
        ap = PointSet(2, [(i, 2 * i) for i in range(5)])
        dec = fibers_along(ap, (1, 2))
        assert len(dec.fibers) == 1

    def test_diagonal(self):
        dec = fibers_along(gen_bn(3), (1, 1))
        assert sorted(len(f.members) for f in dec.fibers) == [1, 1, 2, 2, 3]

    def test_rational_line_ids(self):
        dec = fibers_along(gen_cn(4), (1, 0))
        assert [f.base for f in dec.fibers] == [(0, 0), (0, 1)]

    def test_partition_exactness_random(self):
        for seed in range(25):
            a = gen_random_box(2, 6, 12, seed)
            dec = fibers_along(a, (2, 1))
            got = set()
            for f in dec.fibers:
                assert not (got & set(f.members))
                got |= set(f.members)
            assert got == set(a)


class TestBestDirection:
    def test_an_family(self):
        assert best_direction(gen_an(2, 5)).vector == (1, 0)

    def test_bn_tie_break(self):
        # rows and columns tie on fiber statistics; colex picks (1, 0)
        assert best_direction(gen_bn(3)).vector == (1, 0)

    def test_collinear(self):
        ap = PointSet(2, [(2 * i, 3 * i) for i in range(4)])
        assert best_direction(ap).vector == (2, 3)

    def test_translation_invariance(self):
        for seed in range(10):
            a = gen_random_box(2, 5, 9, seed)
            assert best_direction(a) == best_direction(a.translate((17, -5)))

    def test_order_invariance(self):
        a = PointSet(2, [(0, 0), (1, 1), (2, 2), (5, 0)])
        b = PointSet(2, reversed(a.points))
        assert best_direction(a) == best_direction(b)


class TestSqrtCutoff:
    def test_an_example(self):
        dec = sqrt_cutoff_decompose(gen_an(2, 5))
        assert dec.direction.vector == (1, 0)
        assert [len(f.members) for f in dec.fibers] == [5, 1]
        assert dec.r_selected == 1
        assert set(dec.leftover) == {(0, 1)}

    def test_full_grid(self):
        dec = sqrt_cutoff_decompose(gen_bn(9))
        assert dec.r_selected == 9
        assert len(dec.leftover) == 0

    def test_boundary_arithmetic(self):
        # sizes 100 and 9: 81 < 100 drops the small fiber; 100 and 10 keeps it
        big = [(i, 0) for i in range(100)]
        dec = sqrt_cutoff_decompose(PointSet(2, big + [(i, 1) for i in range(9)]))
        assert dec.r_selected == 1
        assert len(dec.leftover) == 9
        dec = sqrt_cutoff_decompose(PointSet(2, big + [(i, 1) for i in range(10)]))
        assert dec.r_selected == 2
        assert len(dec.leftover) == 0

    def test_cutoff_predicate_random(self):
        for seed in range(40):
            a = gen_random_box(2, 7, 14, seed)
            dec = sqrt_cutoff_decompose(a)
            sizes = [len(f.members) for f in dec.fibers]
            top = sizes[0]
            r = dec.r_selected
            assert all(sizes[i] ** 2 >= top for i in range(r))
            if r < len(sizes):
                assert sizes[r] ** 2 < top


class TestVerify:
    def test_roundtrip(self):
        for seed in range(15):
            a = gen_random_box(2, 6, 11, seed)
            dec = sqrt_cutoff_decompose(a)
            check = verify_decomposition(a, dec)
            assert check.ok, check.problems

    def test_moved_point_not_collinear(self):
        a = gen_bn(3)
        dec = fibers_along(a, (1, 0))
        f0, f1, f2 = dec.fibers
        bad_members = PointSet(2, list(f0.members.points[:-1]) + [f1.members.points[0]])
        bad = LineDecomposition(
            direction=dec.direction,
            fibers=(Fiber(f0.base, bad_members), f1, f2),
            leftover=dec.leftover,
            r_selected=3,
        )
        check = verify_decomposition(a, bad)
        assert not check.ok
        assert any("not collinear" in p for p in check.problems)

    def test_missing_point_incomplete_cover(self):
        a = gen_bn(2)
        dec = fibers_along(a, (1, 0))
        f0, f1 = dec.fibers
        smaller = PointSet(2, f0.members.points[:-1])
        bad = LineDecomposition(
            direction=dec.direction,
            fibers=(Fiber(f0.base, smaller), f1),
            leftover=dec.leftover,
            r_selected=2,
        )
        check = verify_decomposition(a, bad)
        assert not check.ok
        assert any("cover incomplete" in p for p in check.problems)


class TestGridProfile:
    def test_bn_rot90(self):
        gp = grid_profile(gen_bn(3), ROT90)
        assert gp.dir1.vector == (1, 0)
        assert gp.r1 == 3
        assert gp.dir2.vector == (0, 1)
        assert gp.r2 == 3

    def test_single_line(self):
        a = PointSet(2, [(i, 0) for i in range(5)])
        gp = grid_profile(a, ROT90)
        assert gp.r1 == 1
        assert gp.r2 == 5
        assert gp.covered == a

    def test_rational_rotation(self):
        gp = grid_profile(gen_bn(3), RATROT)
        assert gp.r1 == 3
        assert gp.dir2.vector == (3, -4)
        assert gp.r2 == 9

    def test_consistency_random(self):
        # each dir2-line meets each dir1-line at most once
        for seed in range(15):
            a = gen_random_box(2, 5, 10, seed)
            gp = grid_profile(a, ROT90)
            assert gp.r1 * gp.r2 >= len(gp.covered)
            assert set(gp.covered) | set(gp.leftover) == set(a)

    def test_real_eigenvalue_rejected(self):
        with pytest.raises(ValueError):
            grid_profile(gen_bn(2), LinearMap([[2, 0], [0, 3]]))


class TestSerialization:
    def test_decomposition_text_stable(self):
        text = decomposition_to_text(sqrt_cutoff_decompose(gen_an(2, 3)))
        assert text == (
            "direction 1 0\n"
            "r_selected 1\n"
            "fibers 2\n"
            "fiber 0 0 | 3 | 1 0; 2 0; 3 0\n"
            "fiber 0 1 | 1 | 0 1\n"
            "leftover 1\n"
            "0 1\n"
        )

    def test_grid_profile_text_stable(self):
        text = grid_profile_to_text(grid_profile(gen_bn(2), ROT90))
        assert text == (
            "dir1 1 0\n"
            "r1 2\n"
            "dir2 0 1\n"
            "r2 2\n"
            "S 4\n"
            "0 0\n0 1\n1 0\n1 1\n"
            "B 0\n"
        )

    def test_byte_identical_across_runs(self):
        a = gen_random_box(2, 6, 20, 3)
        t1 = decomposition_to_text(sqrt_cutoff_decompose(a))
        t2 = decomposition_to_text(sqrt_cutoff_decompose(a))
        assert t1 == t2


def test_singleton_inputs_rejected():
    single = PointSet(2, [(1, 1)])
    with pytest.raises(ValueError):
        best_direction(single)
    with pytest.raises(ValueError):
        sqrt_cutoff_decompose(single)
