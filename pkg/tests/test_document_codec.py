from fractions import Fraction

import pytest

from conftest import ALIASES, F2, w
from data.document_codec import DocumentCodec
from data.document_service import DocumentService
from groups.moc import Moc
from groups.ultraproduct import FinitelySupportedPermutation
from utils.error_handler import InputError, SchemaError

SEED_DOC = {
    "schema_version": "1.0",
    "signature": 2,
    "entries": [{"word": "a", "value": "1/2"}, {"word": "a b", "value": "1"}],
}


def test_partial_norm_uses_default_aliases_and_completes_inverses():
    document = DocumentCodec.partial_norm(SEED_DOC)
    assert document.signature == F2
    assert document.aliases == ALIASES
    assert document.seed.value(w("a^-1")) == Fraction(1, 2)
    assert document.seed.value(w("b^-1 a^-1")) == 1
    assert document.text(document.word("b^-1 a^-1")) == "b^-1 a^-1"

    encoded = DocumentCodec.encode_partial_norm(document.seed, document.aliases)
    assert encoded["signature"] == [2]
    assert len(encoded["entries"]) == 2
    assert dict(DocumentCodec.partial_norm(encoded).seed.items()) == dict(document.seed.items())


def test_partial_norm_schema_errors():
    with pytest.raises(SchemaError):
        DocumentCodec.partial_norm({**SEED_DOC, "extra": 1})
    with pytest.raises(SchemaError):
        DocumentCodec.partial_norm({**SEED_DOC, "schema_version": "2.0"})
    with pytest.raises(SchemaError):
        DocumentCodec.partial_norm({"signature": 2})
    with pytest.raises(SchemaError):
        DocumentCodec.partial_norm({**SEED_DOC, "aliases": {"g1.1": "g0.1"}})
    with pytest.raises(InputError):
        DocumentCodec.partial_norm({**SEED_DOC, "entries": [{"word": "a", "value": 1}, {"word": "a", "value": 2}]})
    with pytest.raises(InputError):
        DocumentCodec.partial_norm({**SEED_DOC, "entries": [{"word": "a", "value": 0.5}]})


def test_moc_documents_with_and_without_slopes():
    steps = DocumentCodec.moc({"r_max": "4", "breakpoints": [["1", "3"], ["2", "2"], ["3", "5"]]})
    assert steps(1) == 3 and steps(Fraction(7, 2)) == 5
    moc = Moc.from_steps(4, [(1, 3)])
    assert DocumentCodec.moc(DocumentCodec.encode_moc(moc)) == moc
    linear = DocumentCodec.moc({"r_max": "2", "breakpoints": [["0", "0"]], "slopes": ["2"]})
    assert linear(Fraction(3, 2)) == 3
    with pytest.raises(SchemaError):
        DocumentCodec.moc({"r_max": "2", "breakpoints": [["0", "0"]], "slopes": []})


def test_symmetric_target():
    target = DocumentCodec.target({"kind": "symmetric", "n": 3, "norm": "discrete"})
    transposition = target.decode("102")
    assert target.group.norm(transposition) == 1
    assert target.encode(transposition) == "102"
    with pytest.raises(InputError):
        DocumentCodec.target({"kind": "symmetric", "n": 2, "norm": {"01": 0, "10": 0}})
    seminorm = DocumentCodec.target({"kind": "symmetric", "n": 2, "norm": {"01": 0, "10": 0}, "seminorm": True})
    assert seminorm.group.norm(seminorm.decode("10")) == 0


def test_finite_table_target_must_be_a_group():
    table = {"kind": "finite_table", "labels": ["e", "x"], "identity": "e", "norm": "discrete"}
    cyclic = DocumentCodec.target({**table, "table": [["e", "x"], ["x", "e"]]})
    assert cyclic.group.context.order == 2
    with pytest.raises(InputError):
        DocumentCodec.target({**table, "table": [["e", "x"], ["x", "x"]]})
    with pytest.raises(InputError):
        DocumentCodec.target({**table, "table": [["e", "y"], ["x", "e"]]})


def test_lattice_and_free_targets():
    lattice = DocumentCodec.target({"kind": "int_lattice", "rank": 1, "weights": ["3/2"]})
    assert lattice.decode(-2) == (-2,)
    assert lattice.encode((-2,)) == -2
    assert lattice.group.norm((-2,)) == 3
    with pytest.raises(InputError):
        lattice.decode([1, 2])

    free = DocumentCodec.target({"kind": "free_fg_norm", "seed": SEED_DOC})
    assert free.group.norm(free.decode("a a")) == 1
    assert free.encode(w("a b")) == "a b"
    with pytest.raises(SchemaError):
        DocumentCodec.target({"kind": "lie", "rank": 1})


def test_sequence_specs_and_permutations_of_the_naturals():
    spec = DocumentCodec.sequence_spec({"kind": "scaled_free", "prefix": 3})
    assert (spec.kind, spec.prefix, spec.rank) == ("scaled_free", 3, 2)
    explicit = DocumentCodec.sequence_spec({
        "kind": "explicit", "prefix": 1, "groups": [{"kind": "symmetric", "n": 3, "norm": "discrete"}]})
    assert explicit.groups[0].context.order == 6
    p = DocumentCodec.finitary_permutation([[1, 2, 3], [5, 7]])
    assert DocumentCodec.encode_finitary_permutation(p) == [[1, 2, 3], [5, 7]]
    with pytest.raises(SchemaError):
        DocumentCodec.finitary_permutation([1, 2])


def test_to_json_converts_library_values():
    value = {Fraction(1, 2): [w("a b"), {2, 1}], "moc": Moc.identity(1),
             "p": FinitelySupportedPermutation.transposition(2, 4)}
    converted = DocumentCodec.to_json(value, ALIASES)
    assert converted["1/2"] == ["a b", [1, 2]]
    assert converted["moc"] == {"r_max": "1", "breakpoints": [["0", "0"]], "slopes": ["1"]}
    assert converted["p"] == [[2, 4]]
    with pytest.raises(InputError):
        DocumentCodec.to_json(object())


def test_document_service_writes_canonical_text(tmp_path):
    service = DocumentService()
    path = tmp_path / "out.json"
    assert service.write({"b": "1/2", "a": [1]}, str(path))["success"]
    assert path.read_text(encoding="utf-8") == '{\n  "a": [\n    1\n  ],\n  "b": "1/2"\n}\n'
    assert service.read(str(path)) == {"success": True, "data": {"a": [1], "b": "1/2"}}
    assert not service.read(str(tmp_path / "missing.json"))["success"]
    (tmp_path / "bad.json").write_text("{", encoding="utf-8")
    assert not service.read(str(tmp_path / "bad.json"))["success"]
