import time
from fractions import Fraction

import pytest

from conftest import F1, F2, w
from groups.caps import Caps
from groups.families import lattice_normed_group, table_normed_group
from groups.moc import minimal_moc
from groups.norms import (GeneratedNorm, NormBall, PartialPreNorm, check_partial_norm, generated_norm,
                          is_conjugacy_invariant, norm_ball, pullback_seminorm, seminorm_kernel_quotient,
                          verify_norm_axioms)
from groups.words import IDENTITY, enumerate_ball, multiply
from utils.error_handler import CapExceededError, InputError

SEED_VALUES = [Fraction(k, 2) for k in range(1, 7)]


def _random_seed(rng) -> PartialPreNorm:
    """Semilla sobre F_2 con a, b y hasta dos palabras de longitud 2 (|A| ≤ 9)."""
    pick = lambda: SEED_VALUES[int(rng.integers(len(SEED_VALUES)))]
    entries = {w("a"): pick(), w("b"): pick()}
    candidates = [x for x in enumerate_ball(F2, 2) if len(x) == 2]
    for i in rng.choice(len(candidates), size=int(rng.integers(0, 3)), replace=False):
        x = candidates[int(i)]
        if x.inverse() not in entries:
            entries[x] = pick()
    return PartialPreNorm.on_words(F2, entries)


def _relaxed_minimum(seed: PartialPreNorm, length: int):
    """Mínimo de factorizaciones por relajación repetida dentro de la bola de longitud dada."""
    members = set(enumerate_ball(F2, length))
    edges = [(x, v) for x, v in seed.items() if not x.is_identity]
    dist = {IDENTITY: Fraction(0)}
    changed = True
    while changed:
        changed = False
        for u, du in list(dist.items()):
            for s, v in edges:
                target = multiply(u, s)
                if target in members and (target not in dist or du + v < dist[target]):
                    dist[target] = du + v
                    changed = True
    return dist


def test_generated_norm_matches_factorization_minimum_on_random_seeds(rng, caps):
    words = enumerate_ball(F2, 4)
    for _ in range(25):
        seed = _random_seed(rng)
        assert len(seed.carrier) <= 9
        norm = GeneratedNorm(seed, caps)
        expected = _relaxed_minimum(seed, 6)
        for x in words:
            assert norm(x) == expected[x], f"{x} con semilla {seed.items()}"
            factors = norm.witness(x)
            product = IDENTITY
            for factor in factors:
                product = multiply(product, factor)
            assert product == x
            assert sum((seed.value(f) for f in factors), Fraction(0)) == norm(x)


def test_generated_norm_on_f1(f1_seed, caps):
    value, factors = generated_norm(f1_seed, w("a a a", F1), caps)
    assert value == 3
    assert factors == [w("a", F1)] * 3


def test_generated_norm_uses_cheaper_seed_words(caps):
    seed = PartialPreNorm.on_words(F2, {w("a"): Fraction(1, 2), w("b"): Fraction(3), w("a b"): Fraction(1)})
    norm = GeneratedNorm(seed, caps)
    assert norm(w("b")) == Fraction(3, 2)
    assert norm.witness(w("b")) == [w("a^-1"), w("a b")]


def test_seed_must_be_symmetric_and_positive(s3):
    s = s3.index_of("120")
    with pytest.raises(InputError):
        PartialPreNorm(s3, {s: Fraction(1)})
    with pytest.raises(InputError):
        PartialPreNorm.on_words(F2, {w("a"): Fraction(0), w("b"): Fraction(1)})


def test_check_partial_norm_reports_a_cheaper_factorization(caps):
    seed = PartialPreNorm.on_words(F1, {w("a", F1): Fraction(1), w("a a", F1): Fraction(3)})
    verdict = check_partial_norm(seed, caps)
    assert not verdict.ok
    assert verdict.max_factors == 3
    assert verdict.counterexample["element"] == w("a a", F1)
    assert verdict.counterexample["factor_sum"] == 2


def test_check_partial_norm_accepts_word_length(f2_unit_seed, caps):
    assert check_partial_norm(f2_unit_seed, caps).ok


def test_norm_ball_is_complete_and_exact(f2_unit_seed, caps):
    ball = norm_ball(f2_unit_seed, 2, caps)
    assert len(ball) == 17
    assert ball.values() == [0, 1, 2]
    assert ball.symmetry_violations() == []
    assert ball.triangle_violations() == []


def test_pullback_seminorm_evaluates_words_in_the_target(caps):
    pullback = pullback_seminorm(lattice_normed_group(1), [(1,)], caps)
    assert pullback.evaluate(w("a a a", F1)) == (3,)
    assert pullback(w("a a^-1 a^-1", F1)) == 1
    with pytest.raises(InputError):
        pullback(w("b"))


def test_norm_axioms_on_finite_tables(s3, s3_discrete):
    assert verify_norm_axioms(s3_discrete) == []
    assert is_conjugacy_invariant(s3_discrete)
    transpositions = {s3.index_of(label) for label in ("021", "102", "210")}
    values = {x: Fraction(0 if x == s3.identity else 1 if x in transpositions else 5) for x in s3.elements()}
    assert verify_norm_axioms(table_normed_group(s3, values))


def _full_ball(group, radius):
    values = {x: group.norm(x) for x in group.elements}
    return NormBall(Fraction(radius), values, group.context)


def test_minimal_moc_is_identity_for_the_conjugacy_invariant_norm(s3, s3_discrete):
    ball = _full_ball(s3_discrete, 1)
    oracle = lambda x, budget: s3_discrete.norm(x)
    for x in s3.elements():
        assert minimal_moc(ball, x, oracle, s3).is_identity()


def test_minimal_moc_detects_a_non_invariant_norm(s3, caps):
    s, t = s3.index_of("102"), s3.index_of("021")
    norm = GeneratedNorm(PartialPreNorm(s3, {s: Fraction(1), t: Fraction(1)}), caps)
    assert norm(s3.index_of("210")) == 3
    normed = table_normed_group(s3, {x: norm(x) for x in s3.elements()})
    assert verify_norm_axioms(normed) == []
    assert not is_conjugacy_invariant(normed)

    moc = minimal_moc(norm.ball(3), s, norm.value_within, s3)
    assert not moc.is_identity()
    assert moc(1) == 3
    assert moc(Fraction(1, 2)) == Fraction(1, 2)


def test_kernel_quotient_by_alternating_group(s3):
    even = {s3.index_of(label) for label in ("012", "120", "201")}
    seminorm = table_normed_group(s3, {x: Fraction(0 if x in even else 1) for x in s3.elements()})
    assert verify_norm_axioms(seminorm, seminorm=True) == []

    quotient = seminorm_kernel_quotient(seminorm)
    assert quotient.context.order == 2
    assert quotient.context.labels == ["012", "021"]
    assert sorted(quotient.norm(x) for x in quotient.elements) == [0, 1]
    assert verify_norm_axioms(quotient) == []


def test_kernel_quotient_rejects_a_non_normal_kernel(s3):
    kernel = {s3.index_of("012"), s3.index_of("102")}
    seminorm = table_normed_group(s3, {x: Fraction(0 if x in kernel else 1) for x in s3.elements()})
    with pytest.raises(InputError):
        seminorm_kernel_quotient(seminorm)


def test_generated_norm_outside_the_generated_subgroup(s3):
    s = s3.index_of("102")
    norm = GeneratedNorm(PartialPreNorm(s3, {s: Fraction(1)}), Caps())
    assert norm(s) == 1
    with pytest.raises(InputError):
        norm(s3.index_of("021"))


def test_search_stops_when_the_time_budget_runs_out(f2_unit_seed):
    expired = Caps(time_budget=1, deadline=time.monotonic() - 1)
    with pytest.raises(CapExceededError) as info:
        GeneratedNorm(f2_unit_seed, expired, "norm_ball").ball(3)
    assert info.value.stage == "norm_ball"
