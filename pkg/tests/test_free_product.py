from fractions import Fraction

import pytest

from conftest import F1, F2, w
from groups.free_product import (embed_word, free_product_norm, moc_transcript, oracle_discrepancies,
                                 step1_merge, verify_extension)
from groups.moc import Moc
from groups.norms import PartialPreNorm
from groups.words import FreeProductSignature, parse_word
from utils.error_handler import InputError

PRODUCT = FreeProductSignature((1, 1))


def f1_seed(values):
    """Semilla sobre F_1: {"a": v, "a a": v2, …}."""
    return PartialPreNorm.on_words(F1, {w(text, F1): Fraction(v) for text, v in values.items()})


@pytest.fixture
def unit_product(caps):
    """F_1 ∗ F_1 con semillas unitarias y R = 3."""
    return free_product_norm([f1_seed({"a": 1}), f1_seed({"a": 1})], Fraction(3), caps)


def test_step1_merge_embeds_each_factor():
    merged = step1_merge([f1_seed({"a": 1}), f1_seed({"a": 2})])
    assert merged.context.signature == PRODUCT
    assert merged.value(parse_word("g1.1^-1", PRODUCT)) == 2
    assert len(merged.carrier) == 5


def test_step1_merge_rejects_a_factor_that_is_not_a_partial_norm():
    with pytest.raises(InputError):
        step1_merge([f1_seed({"a": 1, "a a": 3}), f1_seed({"a": 1})])


def test_unit_product_radii(unit_product):
    assert unit_product.r_prime == 2
    assert unit_product.r == 4
    assert unit_product.budget == 4
    for g in PRODUCT.generators():
        assert unit_product.factor_mocs[g].is_identity()
        assert unit_product.gammas[g](3) == 6


def test_closure_prefers_conjugation_when_cheaper(unit_product):
    x = parse_word("g0.1 g1.1 g0.1^-1", PRODUCT)
    assert unit_product.sigma(x) == 3
    assert unit_product.tilde.value(x) == 2
    assert x in unit_product.y_set
    assert unit_product(x) == 2
    rules = [step["rule"] for step in unit_product.tilde.derivation(x)]
    assert rules == ["conjugation"]


def test_closure_agrees_with_the_match_oracle(unit_product, caps):
    assert oracle_discrepancies(unit_product, 8, caps) == []


def test_unit_product_extends_factor_norms_and_keeps_mocs(unit_product):
    assert verify_extension(unit_product, 2) == []
    transcript = moc_transcript(unit_product)
    assert len(transcript) == 4
    assert all(entry["ok"] for entry in transcript)


def test_randomized_products_extend_the_factor_norms(rng, caps):
    for _ in range(10):
        value = [Fraction(1), Fraction(3, 2), Fraction(2)][int(rng.integers(3))]
        seeds = []
        for _factor in range(2):
            entries = {"a": value}
            if rng.integers(2):
                entries["a a"] = value * [Fraction(3, 2), Fraction(2)][int(rng.integers(2))]
            seeds.append(f1_seed(entries))
        result = free_product_norm(seeds, Fraction(2), caps)
        assert verify_extension(result, 2) == [], [s.items() for s in seeds]


def test_final_norm_restricts_to_factor_norm_on_powers(caps):
    result = free_product_norm([f1_seed({"a": 1, "a a": Fraction(3, 2)}), f1_seed({"a": 1})], Fraction(2), caps)
    assert result(parse_word("g0.1 g0.1", PRODUCT)) == Fraction(3, 2)
    assert result(embed_word(w("a a a", F1), 0)) == Fraction(5, 2)


def test_supplied_mocs_must_be_valid(caps):
    unit = PartialPreNorm.on_words(F2, {w("a"): Fraction(1), w("b"): Fraction(1)})
    identity = {1: Moc.identity(4), 2: Moc.identity(4)}
    with pytest.raises(InputError):
        free_product_norm([unit, f1_seed({"a": 1})], Fraction(2), caps, [identity, None])


def test_supplied_mocs_are_used_when_valid(caps):
    doubled = {1: Moc.build(8, [(0, 0, 2)])}
    result = free_product_norm([f1_seed({"a": 1}), f1_seed({"a": 1})], Fraction(3), caps, [doubled, None])
    assert result.factor_mocs[PRODUCT.generators()[0]] == doubled[1]
    assert result.factors[0].supplied
    assert verify_extension(result, 2) == []
