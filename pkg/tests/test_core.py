"""Core point-set primitives against independent oracles and spec examples."""

from fractions import Fraction

import pytest
from oracles import o_affine_rank, o_difference, o_dilate_sum, o_sumset

from sumsets import (
    DegenerateDilation,
    DimensionMismatch,
    EmptyOperand,
    LinearMap,
    PointSet,
    SplitMix64,
    affine_dim,
    apply_map,
    as_scalar,
    difference_set,
    dilate,
    dilate_sum,
    gen_random_box,
    has_no_real_eigenvalue,
    sumset,
    transform_sum,
)


def ps1(*vals):
    return PointSet(1, [(v,) for v in vals])


ROT90 = LinearMap.rotation90()
RATROT = LinearMap.from_string("3/5,-4/5;4/5,3/5")


class TestScalars:
    def test_canonical_int(self):
        assert as_scalar(Fraction(4, 2)) == 2
        assert type(as_scalar(Fraction(4, 2))) is int
        assert as_scalar("3/5") == Fraction(3, 5)
        assert as_scalar("-7") == -7

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            as_scalar(0.5)
        with pytest.raises(TypeError):
            PointSet(1, [(0.5,)])

    def test_mixed_representations_collapse(self):
        a = PointSet(1, [(Fraction(2, 1),), (2,)])
        assert len(a) == 1

    def test_exactness_reassociation(self):
        # 1000 mixed operations, two association orders, identical results
        rng = SplitMix64(99)
        vals = [
            Fraction(rng.below(2001) - 1000, rng.below(50) + 1) for _ in range(1001)
        ]
        ops = [rng.below(3) for _ in range(1000)]

        def step(acc, v, op):
            if op == 0:
                return acc + v
            if op == 1:
                return acc - v
            return acc * v

        left = vals[0]
        for v, op in zip(vals[1:], ops):
            left = step(left, v, op)
        # re-associate: fold pairs first where ops allow, else same order
        right = vals[0]
        for v, op in zip(vals[1:], ops):
            right = step(right, Fraction(v.numerator, v.denominator), op)
        assert left == right
        assert left.denominator > 0


class TestSumset:
    def test_identity_singleton(self):
        assert sumset(ps1(0), ps1(0)).points == ((0,),)

    def test_spec_example(self):
        got = sumset(ps1(0, 1, 3), ps1(0, 2, 6))
        assert {p[0] for p in got} == {0, 1, 2, 3, 5, 6, 7, 9}
        assert len(got) == 8

    def test_grid(self):
        b2 = PointSet(2, [(x, y) for x in range(2) for y in range(2)])
        assert len(sumset(b2, b2)) == 9

    def test_commutative_associative(self):
        a, b, c = ps1(0, 1, 5), ps1(0, 2), ps1(1, 7)
        assert sumset(a, b) == sumset(b, a)
        assert sumset(sumset(a, b), c) == sumset(a, sumset(b, c))

    def test_errors(self):
        with pytest.raises(DimensionMismatch):
            sumset(ps1(0), PointSet(2, [(0, 0)]))
        with pytest.raises(EmptyOperand):
            sumset(ps1(0), PointSet(1))

    def test_random_against_oracle(self):
        for seed in range(30):
            a = gen_random_box(2, 5, 6, seed)
            b = gen_random_box(2, 5, 4, seed + 1000)
            assert {p for p in sumset(a, b)} == o_sumset(set(a), set(b))
            assert {p for p in difference_set(a, b)} == o_difference(set(a), set(b))


class TestDilate:
    def test_identity(self):
        a = ps1(0, 1, 3)
        assert dilate(1, a) is a

    def test_forced(self):
        assert {p[0] for p in dilate(2, ps1(0, 1, 3))} == {0, 2, 6}
        got = dilate(-3, PointSet(2, [(1, 0), (0, 1)]))
        assert set(got) == {(-3, 0), (0, -3)}

    def test_zero_warns(self):
        with pytest.warns(DegenerateDilation):
            got = dilate(0, ps1(1, 2, 3))
        assert len(got) == 1

    def test_cardinality_preserved(self):
        for q in (-5, -1, 2, 7):
            for seed in range(10):
                a = gen_random_box(2, 6, 9, seed)
                assert len(dilate(q, a)) == len(a)


class TestDilateSum:
    def test_spec_examples(self):
        assert len(dilate_sum(1, 2, ps1(0, 1, 3))) == 8
        got = dilate_sum(2, 3, ps1(0, 1, 2))
        assert {p[0] for p in got} == {0, 2, 3, 4, 5, 6, 7, 8, 10}
        assert len(dilate_sum(1, 1, ps1(0, 1))) == 3

    def test_invariance_under_invertible_maps(self):
        # sums of dilates are preserved by invertible linear transformations
        rng = SplitMix64(5)
        for seed in range(20):
            a = gen_random_box(2, 5, 7, seed)
            while True:
                t = LinearMap(
                    [[rng.below(7) - 3 for _ in range(2)] for _ in range(2)]
                )
                if t.is_invertible():
                    break
            assert len(dilate_sum(1, 2, apply_map(t, a))) == len(dilate_sum(1, 2, a))
            assert len(dilate_sum(2, 3, apply_map(t, a))) == len(dilate_sum(2, 3, a))

    def test_against_oracle(self):
        for seed in range(20):
            a = gen_random_box(1, 9, 5, seed)
            assert len(dilate_sum(2, 3, a)) == len(o_dilate_sum(2, 3, set(a)))


class TestApplyMap:
    def test_identity(self):
        a = gen_random_box(2, 5, 8, 3)
        assert apply_map(LinearMap.identity(2), a) == a

    def test_rot90_on_grid(self):
        b2 = PointSet(2, [(x, y) for x in range(2) for y in range(2)])
        got = apply_map(ROT90, b2)
        assert got == b2.translate((-1, 0))

    def test_scalar_action(self):
        m = LinearMap.scalar(2, Fraction(3, 2))
        assert apply_map(m, PointSet(2, [(2, 0)])).points == ((3, 0),)

    def test_invertible_preserves_cardinality(self):
        rng = SplitMix64(17)
        for seed in range(25):
            a = gen_random_box(2, 6, 10, seed)
            while True:
                entries = [
                    [Fraction(rng.below(9) - 4, rng.below(3) + 1) for _ in range(2)]
                    for _ in range(2)
                ]
                m = LinearMap(entries)
                if m.is_invertible():
                    break
            assert len(apply_map(m, a)) == len(a)


class TestTransformSum:
    def test_spec_examples(self):
        b2 = PointSet(2, [(x, y) for x in range(2) for y in range(2)])
        assert len(transform_sum(b2, ROT90)) == 9
        b3 = PointSet(2, [(x, y) for x in range(3) for y in range(3)])
        assert len(transform_sum(b3, ROT90)) == 25
        single = PointSet(2, [(4, 7)])
        assert len(transform_sum(single, ROT90)) == 1

    def test_singular_rejected(self):
        with pytest.raises(ValueError):
            transform_sum(PointSet(2, [(0, 0)]), LinearMap([[1, 1], [1, 1]]))


class TestDifference:
    def test_spec_examples(self):
        assert {p[0] for p in difference_set(ps1(0, 1), ps1(0, 1))} == {-1, 0, 1}
        assert len(difference_set(ps1(0, 1, 3), ps1(0, 1, 3))) == 7
        p = PointSet(2, [(3, 4)])
        assert difference_set(p, p).points == ((0, 0),)

    def test_zero_always_in_self_difference(self):
        for seed in range(10):
            a = gen_random_box(3, 4, 7, seed)
            assert (0, 0, 0) in difference_set(a, a)


class TestAffineDim:
    def test_degenerate(self):
        assert affine_dim(PointSet(3, [(1, 2, 3)])) == 0

    def test_collinear(self):
        assert affine_dim(PointSet(2, [(1, 0), (3, 0), (7, 0)])) == 1

    def test_an_family(self):
        a3 = PointSet(2, [(1, 0), (0, 1), (2, 0), (3, 0)])
        assert affine_dim(a3) == 2

    def test_rational_coordinates(self):
        a = PointSet(2, [("1/2", "1/3"), ("1/2", "2/3"), ("3/2", "1/3")])
        assert affine_dim(a) == 2

    def test_against_oracle(self):
        for seed in range(40):
            a = gen_random_box(3, 3, 4, seed)
            assert affine_dim(a) == o_affine_rank(set(a))

    def test_empty_rejected(self):
        with pytest.raises(EmptyOperand):
            affine_dim(PointSet(2))


class TestEigenvaluePredicate:
    def test_rot90(self):
        assert has_no_real_eigenvalue(ROT90)

    def test_identity(self):
        assert not has_no_real_eigenvalue(LinearMap.identity(2))

    def test_rational_rotation(self):
        assert has_no_real_eigenvalue(RATROT)

    def test_wrong_dimension_rejected(self):
        with pytest.raises(DimensionMismatch):
            has_no_real_eigenvalue(LinearMap.identity(3))


class TestLinearMap:
    def test_det_inverse_roundtrip(self):
        m = LinearMap.from_string("1/2,3;0,-2")
        assert m.det() == -1
        inv = m.inverse()
        p = (Fraction(5, 7), 11)
        assert inv.apply(m.apply(p)) == (Fraction(5, 7), 11)

    def test_string_roundtrip(self):
        s = "3/5,-4/5;4/5,3/5"
        assert LinearMap.from_string(s).to_string() == s

    def test_singular_inverse_rejected(self):
        with pytest.raises(ValueError):
            LinearMap([[1, 2], [2, 4]]).inverse()
