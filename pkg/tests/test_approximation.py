from fractions import Fraction

import pytest

from conftest import F1, F2, w
from groups.approximation import approximate, eps_hom_check, rationalize
from groups.families import FiniteTableGroup, lattice_normed_group, table_normed_group
from groups.norms import GeneratedNorm, PartialPreNorm, check_partial_norm, generated_normed_group
from groups.words import enumerate_ball
from utils.error_handler import InputError

SEED_VALUES = [Fraction(k, 2) for k in range(1, 7)]


def _stage(result, name):
    return next(step for step in result.trace if step["stage"] == name)


def _trivial_group():
    return table_normed_group(FiniteTableGroup(["1"], [[0]], 0), {0: Fraction(0)})


def test_approximate_integers(caps):
    target = lattice_normed_group(1)
    subset = [(0,), (1,), (-1,), (2,), (-2,)]
    result = approximate(target, subset, Fraction(1, 4), caps)

    assert result.route == "ball_action"
    assert _stage(result, "stage")["n"] == 4
    assert _stage(result, "stage")["ball_size"] == 9
    rationalized = _stage(result, "rationalize")
    assert rationalized["classes"] == [4, 3, 2, 1]
    assert rationalized["c_min"] == Fraction(1, 9)
    assert rationalized["increments"] == [Fraction(k, 90) for k in range(1, 5)]
    assert _stage(result, "finite_approx")["N"] == 16
    assert _stage(result, "finite_approx")["vertices"] == 33
    relations = _stage(result, "relation_defects")
    assert all(d["sigma"] <= relations["bound"] for d in relations["defects"])

    certificate = result.certificate
    assert certificate.violations == []
    assert certificate.checked == 24
    assert certificate.relation_defect == 0
    assert certificate.norm_defect == Fraction(4, 90)
    assert len(certificate.moc_report) == 5
    for entry in certificate.moc_report:
        assert entry["ok"] and entry["exceeded"] == []
    assert certificate.ok


def test_approximate_symmetric_group_through_its_finite_quotient(s3, s3_discrete, caps):
    result = approximate(s3_discrete, s3.elements(), Fraction(1, 2), caps)

    assert result.route == "finite_quotient"
    assert _stage(result, "stage")["n"] == 3
    assert _stage(result, "stage")["ball_size"] == 457
    assert _stage(result, "route")["kernel_on_ball"]
    assert result.group.context.order == 6
    certificate = result.certificate
    assert certificate.violations == []
    assert certificate.norm_defect == Fraction(1, 2742)
    for entry in certificate.moc_report:
        assert entry["ok"]
        assert entry["finite_moc"].is_identity()
    assert certificate.ok


def test_approximate_free_group_target(f1_seed, caps):
    target = generated_normed_group(f1_seed, caps)
    subset = [w("", F1), w("a", F1), w("a^-1", F1)]
    result = approximate(target, subset, Fraction(1, 2), caps)
    assert result.route == "ball_action"
    assert _stage(result, "stage")["n"] == 3
    assert result.certificate.ok
    assert result.words[w("a", F1)] == w("a", F1)


def test_trivial_subset_uses_the_trivial_group(s3, s3_discrete, caps):
    result = approximate(s3_discrete, [s3.identity], Fraction(1, 2), caps)
    assert result.route == "trivial"
    assert result.group.context.order == 1
    assert result.certificate.ok


def test_route_is_validated(s3, s3_discrete, caps):
    with pytest.raises(InputError):
        approximate(lattice_normed_group(1), [(0,), (1,)], Fraction(1, 2), caps, route="finite_quotient")
    with pytest.raises(InputError):
        approximate(s3_discrete, s3.elements(), Fraction(1, 2), caps, route="other")
    with pytest.raises(InputError):
        approximate(s3_discrete, s3.elements(), Fraction(0), caps)


def test_rationalize_small_ball():
    words = enumerate_ball(F2, 1)
    rho = {x: Fraction(0 if x.is_identity else 1) for x in words}
    seed = rationalize(words, rho)
    assert seed.values[w("a")] == Fraction(21, 20)
    assert seed.values[w("")] == 0
    assert seed.c_min == Fraction(1, 5)


def test_rationalize_rejects_asymmetric_input():
    words = enumerate_ball(F2, 1)
    rho = {x: Fraction(0 if x.is_identity else 1) for x in words}
    rho[w("a")] = Fraction(2)
    with pytest.raises(InputError):
        rationalize(words, rho)
    with pytest.raises(InputError):
        rationalize([w(""), w("a")], {w(""): Fraction(0), w("a"): Fraction(1)})


def test_rationalize_bounds_on_random_inputs(rng, caps):
    extra_words = [x for x in enumerate_ball(F2, 2) if len(x) == 2]
    pick = lambda: SEED_VALUES[int(rng.integers(len(SEED_VALUES)))]
    for _ in range(50):
        seed = PartialPreNorm.on_words(F2, {w("a"): pick(), w("b"): pick(), w("a b"): pick()})
        norm = GeneratedNorm(seed, caps)
        words = enumerate_ball(F2, 1)
        for i in rng.choice(len(extra_words), size=int(rng.integers(0, 4)), replace=False):
            x = extra_words[int(i)]
            if x not in words:
                words += [x, x.inverse()]
        assert len(words) <= 11
        rho = {x: norm(x) for x in words}

        rationalized = rationalize(words, rho)
        bound = Fraction(1, len(words))
        for x in words:
            gap = rationalized.values[x] - rho[x]
            assert 0 <= gap <= bound
            assert (gap == 0) == x.is_identity
        for x in words:
            for y in words:
                if rho[x] < rho[y]:
                    assert rationalized.values[x] < rationalized.values[y]
                if rho[x] == rho[y]:
                    assert rationalized.values[x] == rationalized.values[y]
        assert check_partial_norm(rationalized.seed(F2), caps).ok


def test_eps_hom_check_uses_strict_inequalities():
    source = lattice_normed_group(1)
    subset = [(0,), (1,)]
    phi = {(0,): 0, (1,): 0}
    certificate = eps_hom_check(phi, source, subset, _trivial_group(), Fraction(1))
    assert certificate.checked == 5
    assert certificate.violations == [{"condition": "norm", "g": (1,), "defect": Fraction(1)}]
    assert not certificate.ok
    assert eps_hom_check(phi, source, subset, _trivial_group(), Fraction(2)).ok


def test_eps_hom_check_validates_its_input():
    source = lattice_normed_group(1)
    with pytest.raises(InputError):
        eps_hom_check({(0,): 0}, source, [(0,)], _trivial_group(), Fraction(0))
    with pytest.raises(InputError):
        eps_hom_check({(0,): 0}, source, [(0,), (1,)], _trivial_group(), Fraction(1))
