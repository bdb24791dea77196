from fractions import Fraction

import pytest

from conftest import w
from groups.moc import (Moc, eventual_domination_radius, minimal_moc, moc_le, moc_transform, pointwise_max,
                        verify_moc)
from utils.error_handler import InputError, MocDomainError


def test_identity_and_domain():
    identity = Moc.identity(2)
    assert identity(Fraction(3, 2)) == Fraction(3, 2)
    assert identity(0) == 0
    with pytest.raises(MocDomainError):
        identity(3)


def test_affine_moc_jumps_at_zero():
    moc = Moc.affine(4, 2)
    assert moc(0) == 0
    assert moc(Fraction(1, 10)) == Fraction(21, 10)
    assert moc(4) == 6


def test_build_rejects_functions_below_the_diagonal_or_decreasing():
    with pytest.raises(InputError):
        Moc.build(2, [(0, 0, Fraction(1, 2))])
    with pytest.raises(InputError):
        Moc.build(4, [(0, 3, 0), (1, 2, 1)])
    with pytest.raises(InputError):
        Moc.build(2, [(1, 1, 1)])


def test_from_steps_takes_running_maximum_with_the_diagonal():
    moc = Moc.from_steps(4, [(1, 3), (2, 2), (3, 5)])
    assert moc(Fraction(1, 2)) == Fraction(1, 2)
    assert moc(1) == 3
    assert moc(2) == 3
    assert moc(Fraction(7, 2)) == 5
    assert moc(4) == 5


def test_transforms():
    assert moc_transform(Moc.identity(4), "add_identity")(3) == 6
    doubled = moc_transform(Moc.from_steps(2, [(1, 3)]), "double")
    assert doubled(1) == 6
    assert doubled(Fraction(1, 2)) == 1
    bound = moc_transform(Moc.identity(2), "scale_shift", epsilon=Fraction(1, 4))
    assert bound(2) == Fraction(9, 2)
    with pytest.raises(InputError):
        moc_transform(Moc.identity(2), "triple")
    with pytest.raises(InputError):
        moc_transform(Moc.identity(2), "pointwise_max")


def test_pointwise_max_splits_at_the_crossing():
    first = Moc.build(4, [(0, 0, 2)])
    second = Moc.affine(4, 3)
    combined = pointwise_max(first, second)
    assert combined.breakpoints() == [0, 3]
    assert combined(1) == 4
    assert combined(3) == 6
    assert combined(Fraction(7, 2)) == 7
    assert combined(4) == 8
    with pytest.raises(MocDomainError):
        pointwise_max(first, Moc.identity(2))


def test_eventual_domination_radius():
    assert eventual_domination_radius(Moc.build(5, [(0, 0, 2)]), 3) == 3
    assert eventual_domination_radius(Moc.build(3, [(0, 0, 2)]), 3) == 3
    assert eventual_domination_radius(Moc.identity(5), 0) == 0
    assert eventual_domination_radius(Moc.identity(5), 1) is None
    assert eventual_domination_radius(Moc.from_steps(2, [(1, 3)]), 2) == 1


def test_domination_on_the_first_segment_uses_the_right_limit():
    flat = Moc.build(2, [(0, 2, 0)])
    assert eventual_domination_radius(flat, 2) == 0
    assert flat(0) == 0
    assert flat.right_limit(0) == 2
    assert flat.right_limit(Fraction(3, 2)) == flat(Fraction(3, 2)) == 2
    # alcanza 2 + r en 0⁺ pero no vuelve a hacerlo
    assert flat(1) < 2 + 1
    with pytest.raises(MocDomainError):
        flat.right_limit(3)


def test_moc_le_compares_one_sided_limits():
    low = Moc.identity(4)
    high = Moc.affine(4, 1)
    assert moc_le(low, high)
    assert not moc_le(high, low)
    # igual en los quiebres pero mayor justo antes de r = 2
    steep = Moc.build(4, [(0, 0, 2), (2, 4, 0)])
    flat = Moc.from_steps(4, [(2, 4)])
    assert moc_le(flat, steep)
    assert not moc_le(steep, flat)
    assert moc_le(steep, flat, radii=[0, 2, 4])


def test_minimal_moc_of_a_free_generator(f2_length_norm):
    norm = f2_length_norm
    moc = minimal_moc(norm.ball(2), w("a"), norm.value_within, norm.context)
    assert moc(Fraction(1, 2)) == Fraction(1, 2)
    assert moc(1) == 3
    assert moc(2) == 4
    inverse = minimal_moc(norm.ball(2), w("a^-1"), norm.value_within, norm.context)
    assert inverse == moc


def test_minimal_moc_is_valid_and_least(f2_length_norm):
    norm = f2_length_norm
    ball = norm.ball(2)
    minimal = minimal_moc(ball, w("a"), norm.value_within, norm.context)
    assert verify_moc(minimal, w("a"), ball, norm.value_within, norm.context).ok
    assert verify_moc(Moc.affine(2, 2), w("a"), ball, norm.value_within, norm.context).ok
    assert moc_le(minimal, Moc.affine(2, 2))

    verdict = verify_moc(Moc.identity(2), w("a"), ball, norm.value_within, norm.context)
    assert not verdict.ok
    assert verdict.witness["conjugate_value"] > verdict.witness["bound"]


def test_verify_moc_needs_the_whole_ball_radius(f2_length_norm):
    norm = f2_length_norm
    with pytest.raises(MocDomainError):
        verify_moc(Moc.identity(1), w("a"), norm.ball(2), norm.value_within, norm.context)


def test_minimal_mocs_compose_along_products(f2_length_norm):
    norm = f2_length_norm
    context = norm.context
    gamma_a = minimal_moc(norm.ball(6), w("a"), norm.value_within, context)
    gamma_b = minimal_moc(norm.ball(6), w("b"), norm.value_within, context)
    gamma_ab = minimal_moc(norm.ball(2), w("a b"), norm.value_within, context)
    for r in (0, Fraction(1, 2), 1, Fraction(3, 2), 2):
        bound = max(gamma_a(gamma_b(r)), gamma_b(gamma_a(r)))
        assert gamma_ab(r) <= bound
