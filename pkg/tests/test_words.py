import pytest

from conftest import ALIASES, F1, F2, letter, w
from groups.caps import Caps
from groups.words import (IDENTITY, FreeProductSignature, Word, ball_size, conjugate, enumerate_ball,
                          format_word, multiply, parse_letters, parse_word, project_to_factor, reduce)
from utils.error_handler import CapExceededError, InputError, SignatureMismatchError, UnknownGeneratorError


def test_reduce_cancels_adjacent_inverse_pairs():
    a, b = letter(0, 1), letter(0, 2)
    assert reduce([a, a.inverse(), b]) == Word((b,))
    assert reduce([a, b, b.inverse(), a.inverse()]) == IDENTITY


def test_multiply_cancels_only_at_the_junction():
    assert multiply(w("a b"), w("b^-1 a")) == w("a a")
    assert multiply(w("a b"), w("a")) == w("a b a")
    assert w("a b") * w("b^-1 a^-1") == IDENTITY


def test_inverse_and_conjugate():
    x = w("a b^-1")
    assert x.inverse() == w("b a^-1")
    assert conjugate(w("a"), w("b")) == w("a b a^-1")
    assert conjugate(w("a"), w("a")) == w("a")


def test_ball_matches_closed_form_and_canonical_order():
    ball = enumerate_ball(F2, 2)
    assert len(ball) == ball_size(F2, 2) == 17
    assert ball[:5] == [IDENTITY, w("a"), w("a^-1"), w("b"), w("b^-1")]
    assert len(set(ball)) == len(ball)
    assert ball_size(F1, 4) == 9


def test_ball_cap_is_enforced():
    with pytest.raises(CapExceededError) as info:
        enumerate_ball(F2, 2, Caps(ball=10))
    assert info.value.stage == "enumerate_ball"
    assert info.value.reached == 17


def test_parse_and_format_with_aliases():
    word = parse_word("a b^-1 b a", F2, ALIASES)
    assert word == w("a a")
    assert format_word(word, ALIASES) == "a a"
    assert format_word(word) == "g0.1 g0.1"
    assert parse_word("1", F2) == IDENTITY
    assert format_word(IDENTITY) == "1"


def test_parse_letters_keeps_the_raw_word():
    raw = parse_letters("a a^-1 b", ALIASES)
    assert len(raw) == 3
    assert reduce(raw) == w("b")


def test_parse_rejects_unknown_generators_and_bad_tokens():
    with pytest.raises(UnknownGeneratorError):
        parse_word("g0.3", F2)
    with pytest.raises(InputError):
        parse_word("x", F2)
    with pytest.raises(SignatureMismatchError):
        F1.check(w("b"))


def test_projection_to_factor_is_a_homomorphism():
    signature = FreeProductSignature((1, 1))
    x = parse_word("g0.1 g1.1 g0.1^-1", signature)
    assert project_to_factor(x, 0) == IDENTITY
    assert project_to_factor(x, 1) == parse_word("g1.1", signature)
    y = parse_word("g1.1^-1 g0.1 g1.1", signature)
    for factor in (0, 1):
        assert project_to_factor(multiply(x, y), factor) == multiply(project_to_factor(x, factor),
                                                                     project_to_factor(y, factor))


def test_signature_requires_generators_in_every_factor():
    with pytest.raises(InputError):
        FreeProductSignature((2, 0))
    assert FreeProductSignature((1, 2)).rank == 3
