import time
from fractions import Fraction

import pytest

from conftest import ALIASES, F2, w
from groups.caps import Caps
from groups.matches import Match, MatchOracle, enumerate_matches, lambda_rho, step2_tilde_oracle
from groups.moc import Moc
from groups.words import parse_letters
from utils.error_handler import CapExceededError, InputError, MatchError


def raw(text):
    return tuple(parse_letters(text, ALIASES))


@pytest.fixture
def double_gammas():
    """Γ = 2·id para a y b."""
    moc = Moc.build(10, [(0, 0, 2)])
    return {g: moc for g in F2.generators()}


def test_enumerate_matches_counts_non_crossing_pairings():
    matches = enumerate_matches(raw("a a^-1 a a^-1"))
    pairs = sorted(tuple(m.pairs()) for m in matches)
    assert len(matches) == 7
    assert pairs == sorted([(), ((1, 2),), ((1, 4),), ((2, 3),), ((3, 4),), ((1, 2), (3, 4)), ((1, 4), (2, 3))])
    for match in matches:
        match.validate(raw("a a^-1 a a^-1"))


def test_enumerate_matches_respects_the_length_cap():
    with pytest.raises(CapExceededError):
        enumerate_matches(raw("a " * 5), Caps(match=4))


def test_invalid_matches_are_rejected():
    with pytest.raises(MatchError):
        Match.from_pairs(4, [(1, 3), (2, 4)]).validate(raw("a b a^-1 b^-1"))
    with pytest.raises(MatchError):
        Match.from_pairs(2, [(1, 2)]).validate(raw("a a"))
    with pytest.raises(MatchError):
        Match.identity(3).validate(raw("a b"))


def test_lambda_rho_follows_the_structural_recursion(f2_length_norm, double_gammas):
    word = raw("a b a^-1")
    assert lambda_rho(word, Match.identity(3), f2_length_norm, double_gammas) == 3
    assert lambda_rho(word, Match.from_pairs(3, [(1, 3)]), f2_length_norm, double_gammas) == 2
    # bloque inicial fijo seguido de un par que se anula
    word = raw("a b b^-1")
    assert lambda_rho(word, Match.from_pairs(3, [(2, 3)]), f2_length_norm, double_gammas) == 1
    # corte en ρ(1) cuando el par no cubre toda la palabra
    word = raw("a b a^-1 b")
    assert lambda_rho(word, Match.from_pairs(4, [(1, 3)]), f2_length_norm, double_gammas) == 3
    assert lambda_rho((), Match.identity(0), f2_length_norm, double_gammas) == 0


def test_oracle_modes_agree(f2_length_norm, double_gammas, caps):
    fast = MatchOracle(F2, f2_length_norm, double_gammas, 4, caps)
    exhaustive = MatchOracle(F2, f2_length_norm, double_gammas, 4, caps, exhaustive=True)
    assert fast.table == exhaustive.table
    assert fast.value(w("a b a^-1")) == 2
    assert fast.value(w("a b")) == 2


def test_oracle_is_bounded_by_sigma(f2_length_norm, double_gammas, caps):
    oracle = MatchOracle(F2, f2_length_norm, double_gammas, 3, caps)
    for x, value in oracle.table.items():
        assert value <= f2_length_norm(x)


def test_oracle_requires_length_at_least_the_word(f2_length_norm, double_gammas, caps):
    with pytest.raises(InputError):
        step2_tilde_oracle(w("a b a"), 2, F2, f2_length_norm, double_gammas, caps)
    assert step2_tilde_oracle(w("a b a^-1"), 3, F2, f2_length_norm, double_gammas, caps) == Fraction(2)


def test_oracle_respects_the_ball_cap(f2_length_norm, double_gammas):
    with pytest.raises(CapExceededError):
        MatchOracle(F2, f2_length_norm, double_gammas, 4, Caps(ball=100))


def test_oracle_respects_the_time_budget(f2_length_norm, double_gammas):
    expired = Caps(time_budget=1, deadline=time.monotonic() - 1)
    with pytest.raises(CapExceededError) as info:
        MatchOracle(F2, f2_length_norm, double_gammas, 3, expired)
    assert info.value.stage == "step2_tilde_oracle"
