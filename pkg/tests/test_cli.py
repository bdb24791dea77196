import json

import pytest

from main import run

S3 = {"kind": "symmetric", "n": 3, "norm": "discrete"}
LABELS = ["012", "021", "102", "120", "201", "210"]


@pytest.fixture
def invoke(tmp_path):
    """Ejecuta un comando con documentos en tmp_path y devuelve (código, salida)."""
    def _invoke(command, document, *flags):
        source, output = tmp_path / "in.json", tmp_path / "out.json"
        source.write_text(json.dumps(document), encoding="utf-8")
        code = run([command, "--input", str(source), "--output", str(output), *flags])
        return code, json.loads(output.read_text(encoding="utf-8"))
    return _invoke


def test_norm_eval(invoke):
    code, out = invoke("norm-eval", {"seed": {"signature": 1, "entries": [{"word": "a", "value": 1}]},
                                     "word": "a a a"})
    assert code == 0
    assert out["status"] == "ok"
    assert out["schema_version"] == "1.0"
    assert out["value"] == "3"
    assert out["factors"] == ["a", "a", "a"]


def test_seed_document_flag(invoke, tmp_path):
    seed = tmp_path / "seed.json"
    seed.write_text(json.dumps({"signature": 1, "entries": [{"word": "a", "value": "1/2"}]}), encoding="utf-8")
    code, out = invoke("norm-eval", {"word": "a^-1 a^-1"}, "--seed-doc", str(seed))
    assert code == 0
    assert out["value"] == "1"


def test_failed_partial_norm_check_exits_with_two(invoke):
    seed = {"signature": 1, "entries": [{"word": "a", "value": 1}, {"word": "a a", "value": 3}]}
    code, out = invoke("norm-eval", {"seed": seed, "word": "a a", "check": True})
    assert code == 2
    assert out["status"] == "certificate_failure"
    assert out["partial_norm_check"]["max_factors"] == 3


def test_eps_check_with_the_identity_map(invoke):
    document = {
        "source": S3, "target": S3, "subset": LABELS, "epsilon": "1/2",
        "phi": [{"element": label, "image": label} for label in LABELS],
    }
    code, out = invoke("eps-check", document)
    assert code == 0
    assert out["certificate"]["violations"] == []


def test_unknown_field_exits_with_one(invoke):
    code, out = invoke("norm-eval", {"seed": {"signature": 1, "entries": []}, "word": "a", "colour": "red"})
    assert code == 1
    assert out["status"] == "input_error"
    assert out["error"]["kind"] == "SchemaError"


def test_cap_exceeded_exits_with_three(invoke):
    seed = {"signature": 2, "entries": [{"word": "a", "value": 1}, {"word": "b", "value": 1}]}
    code, out = invoke("norm-ball", {"seed": seed, "radius": 10}, "--cap-ball", "50")
    assert code == 3
    assert out["status"] == "cap_exceeded"
    assert out["error"]["cap"] == 50


def test_ultra_diagnose_collapse(invoke):
    code, out = invoke("ultra-diagnose", {"mode": "collapse", "g": "a b", "n": 1})
    assert code == 0
    assert out["report"]["generator"] == "b"
    assert out["report"]["value"] == "5"


def test_approximate_on_the_integers(invoke):
    document = {"target": {"kind": "int_lattice", "rank": 1}, "subset": [0, 1, -1, 2, -2], "epsilon": "1/4"}
    code, out = invoke("approximate", document)
    assert code == 0
    assert out["route"] == "ball_action"
    assert out["certificate"]["ok"]
    assert out["certificate"]["norm_defect"] == "2/45"
    assert [entry["element"] for entry in out["phi"]] == [0, 1, -1, 2, -2]


def test_output_is_byte_stable(tmp_path):
    source = tmp_path / "in.json"
    source.write_text(json.dumps({"mode": "sinf_delta", "p": [[1, 4]], "n": 2}), encoding="utf-8")
    texts = []
    for name in ("first.json", "second.json"):
        assert run(["ultra-diagnose", "--input", str(source), "--output", str(tmp_path / name)]) == 0
        texts.append((tmp_path / name).read_bytes())
    assert texts[0] == texts[1]


def test_time_budget_exits_with_three(invoke):
    seed = {"signature": 2, "entries": [{"word": "a", "value": 1}, {"word": "b", "value": 1}]}
    code, out = invoke("norm-ball", {"seed": seed, "radius": 10}, "--time-budget", "1e-9")
    assert code == 3
    assert out["status"] == "cap_exceeded"
    assert out["error"]["stage"] == "norm_ball"
    assert "tiempo" in out["error"]["message"]
