from fractions import Fraction

import numpy as np
import pytest

from conftest import F2, w
from groups.ultraproduct import (FinitelySupportedPermutation, GroupSequenceSpec, conjugation_distortion,
                                 continuity_profile, filter_limit, scaled_f2_collapse_witness, sinf_delta)
from groups.words import Word, enumerate_ball
from utils.error_handler import InputError


def test_finitely_supported_permutations():
    p = FinitelySupportedPermutation.from_cycles([[2, 5, 7]])
    assert p(2) == 5 and p(7) == 2 and p(1) == 1
    assert p.norm() == Fraction(1, 2)
    assert (p * p.inverse()).norm() == 0
    assert p * p * p == FinitelySupportedPermutation.identity()
    s, t = FinitelySupportedPermutation.transposition(1, 2), FinitelySupportedPermutation.transposition(2, 3)
    assert (s * t)(3) == 1
    with pytest.raises(InputError):
        FinitelySupportedPermutation({1: 2, 2: 2})
    with pytest.raises(InputError):
        FinitelySupportedPermutation.from_cycles([[1, 2], [2, 3]])


def test_collapse_witness_examples():
    witness = scaled_f2_collapse_witness(w("a b"), 1)
    assert witness.generator == w("b")
    assert witness.conjugate == w("b^-1 a^-1 b a b")
    assert witness.value == 5
    assert scaled_f2_collapse_witness(w("a"), 2).value == Fraction(3, 2)
    with pytest.raises(InputError):
        scaled_f2_collapse_witness(w(""), 1)
    with pytest.raises(InputError):
        scaled_f2_collapse_witness(w("a b"), 1, rank=3)


def test_collapse_witness_on_the_ball_of_radius_six():
    for g in enumerate_ball(F2, 6):
        if g.is_identity:
            continue
        for n in range(1, 11):
            witness = scaled_f2_collapse_witness(g, n)
            assert witness.value == Fraction(2 * len(g) + 1, n)
            assert witness.value > Fraction(2 * len(g), n)
            first = Word(g.letters[:1])
            assert witness.generator not in (first, first.inverse())


def test_sinf_delta_for_the_identity():
    result = sinf_delta(FinitelySupportedPermutation.identity(), 3)
    assert result.m == 3
    assert result.delta == Fraction(1, 3)
    assert result.checked == 1
    assert result.counterexamples == []
    assert result.witness == FinitelySupportedPermutation.transposition(3, 4)
    assert result.witness_conjugate_value == Fraction(1, 3)


def test_sinf_delta_converse_witness_moves_the_image_of_n():
    p = FinitelySupportedPermutation.transposition(1, 2)
    result = sinf_delta(p, 2)
    assert (result.m, result.delta) == (2, Fraction(1, 2))
    assert result.witness == FinitelySupportedPermutation.transposition(1, 3)
    assert result.witness_value == 1
    assert result.witness_conjugate_value >= Fraction(1, 2)


def test_sinf_delta_on_random_permutations(rng):
    for _ in range(100):
        size = int(rng.integers(0, 13))
        support = [int(k) for k in rng.choice(np.arange(1, 16), size=size, replace=False)]
        images = [int(k) for k in rng.permutation(support)] if support else []
        p = FinitelySupportedPermutation(dict(zip(support, images)))
        n = int(rng.integers(1, 11))

        result = sinf_delta(p, n)
        assert result.counterexamples == []
        assert result.witness_value >= result.delta
        assert result.witness(p(n)) > result.m
        assert result.witness_conjugate_value >= Fraction(1, n)


def test_filter_limit_tails():
    values = [1, Fraction(1, 2), Fraction(1, 3), Fraction(1, 2), Fraction(1, 3)]
    interval = filter_limit(values)
    assert interval.tail_start == 4
    assert (interval.liminf, interval.limsup) == (Fraction(1, 3), Fraction(1, 2))
    interval = filter_limit([3, 2, 1])
    assert interval.tail_start == 3
    assert (interval.liminf, interval.limsup) == (1, 1)
    interval = filter_limit([3, 2, 1], tail_start=1)
    assert (interval.liminf, interval.limsup) == (1, 3)
    with pytest.raises(InputError):
        filter_limit([])
    with pytest.raises(InputError):
        filter_limit([1, 2], tail_start=3)


def test_distortion_in_the_scaled_free_group():
    spec = GroupSequenceSpec("scaled_free", 4)
    distortion = conjugation_distortion(spec, w("a"), 1, 2)
    assert distortion.value == 2
    assert distortion.ball_size == 17
    assert len(distortion.witness) == 2
    with pytest.raises(InputError):
        conjugation_distortion(spec, w("a"), 1, 5)


def test_distortion_in_finitely_supported_permutations():
    spec = GroupSequenceSpec("finitely_supported_permutations", 3)
    g = FinitelySupportedPermutation.transposition(1, 5)
    distortion = conjugation_distortion(spec, g, Fraction(1, 2), 1)
    assert distortion.value == 1
    h = distortion.witness
    assert h.norm() <= Fraction(1, 2)
    conjugated = g.inverse() * h * g if distortion.side == "inner" else g * h * g.inverse()
    assert conjugated.norm() == distortion.value


def test_distortion_in_an_explicit_sequence(s3, s3_discrete):
    spec = GroupSequenceSpec("explicit", 2, groups=[s3_discrete, s3_discrete])
    distortion = conjugation_distortion(spec, s3.index_of("102"), 1, 2)
    assert distortion.value == 1
    assert distortion.ball_size == 6
    with pytest.raises(InputError):
        GroupSequenceSpec("explicit", 3, groups=[s3_discrete])
    with pytest.raises(InputError):
        GroupSequenceSpec("ultra", 3)


def test_continuity_profile_of_a_constant_sequence(caps):
    spec = GroupSequenceSpec("scaled_free", 4)
    profile = continuity_profile(spec, lambda n: w("a"), Fraction(1, 2), caps)
    assert [d.value for d in profile.stages] == [0, Fraction(3, 2), 1, 1]
    assert (profile.interval.liminf, profile.interval.limsup) == (1, 1)
    with pytest.raises(InputError):
        continuity_profile(spec, [w("a")], Fraction(1, 2), caps)
