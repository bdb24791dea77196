"""Fixtures compartidas de las pruebas."""

from fractions import Fraction

import numpy as np
import pytest

from groups.caps import Caps
from groups.families import FiniteTableGroup, discrete_norm
from groups.norms import GeneratedNorm, PartialPreNorm
from groups.words import FreeProductSignature, GeneratorSymbol, Word, parse_word

F1 = FreeProductSignature.free_group(1)
F2 = FreeProductSignature.free_group(2)
ALIASES = {"a": "g0.1", "b": "g0.2"}


def w(text: str, signature: FreeProductSignature = F2) -> Word:
    """Palabra en sintaxis con alias a, b."""
    return parse_word(text, signature, ALIASES)


def letter(factor: int, index: int, sign: int = 1) -> GeneratorSymbol:
    return GeneratorSymbol(factor, index, sign)


@pytest.fixture
def caps():
    return Caps(ball=200_000, match=12)


@pytest.fixture
def f1_seed():
    """F_1 con a ↦ 1."""
    return PartialPreNorm.on_words(F1, {w("a", F1): Fraction(1)})


@pytest.fixture
def f2_unit_seed():
    """F_2 con a, b ↦ 1: la norma generada es la longitud de palabra."""
    return PartialPreNorm.on_words(F2, {w("a"): Fraction(1), w("b"): Fraction(1)})


@pytest.fixture
def f2_length_norm(f2_unit_seed, caps):
    return GeneratedNorm(f2_unit_seed, caps)


@pytest.fixture
def s3():
    return FiniteTableGroup.symmetric_group(3)


@pytest.fixture
def s3_discrete(s3):
    return discrete_norm(s3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
