import time

import pytest

from config.runtime import RuntimeConfig
from groups.caps import Caps
from utils.error_handler import (CapExceededError, CertificateError, ErrorHandler, InputError, SchemaError,
                                 handle_errors)


class _View:
    command = "norm-eval"

    def __init__(self, error):
        self.error = error

    @handle_errors
    def render(self):
        raise self.error


def test_error_documents_carry_status_and_exit_code():
    document = ErrorHandler.error_document("norm-ball", CapExceededError("norm_ball", 50, 51, "R=10"))
    assert document["status"] == "cap_exceeded"
    assert document["error"]["stage"] == "norm_ball"
    assert (document["error"]["cap"], document["error"]["reached"]) == (50, 51)
    assert ErrorHandler.exit_code_for(document["status"]) == 3

    failure = ErrorHandler.error_document("approximate", CertificateError("σ' no es norma parcial"))
    assert failure["status"] == "certificate_failure"
    assert ErrorHandler.exit_code_for(failure["status"]) == 2
    assert ErrorHandler.exit_code_for("desconocido") == 1


@pytest.mark.parametrize("error, kind", [
    (SchemaError("campo extra"), "SchemaError"),
    (KeyError("word"), "InputError"),
    (TypeError("no es una lista"), "InputError"),
])
def test_handle_errors_turns_exceptions_into_input_errors(error, kind):
    document = _View(error).render()
    assert document["command"] == "norm-eval"
    assert document["status"] == "input_error"
    assert document["error"]["kind"] == kind


def test_handle_errors_lets_unexpected_errors_through():
    with pytest.raises(ZeroDivisionError):
        _View(ZeroDivisionError()).render()


def test_runtime_config_reads_the_environment(monkeypatch):
    monkeypatch.setenv("APROX_CAP_BALL", "500")
    monkeypatch.delenv("APROX_CAP_MATCH", raising=False)
    monkeypatch.setenv("APROX_LOG_LEVEL", "warning")
    config = RuntimeConfig()
    assert config.caps.ball == 500
    assert config.caps.match == 12
    assert config.log_level == "WARNING"

    overridden = config.with_overrides(cap_match=6, log_level="debug")
    assert (overridden.caps.ball, overridden.caps.match, overridden.log_level) == (500, 6, "DEBUG")
    assert config.caps.match == 12
    with pytest.raises(ValueError):
        config.with_overrides(cap_ball=0)


def test_runtime_config_rejects_invalid_variables(monkeypatch):
    monkeypatch.setenv("APROX_CAP_BALL", "mucho")
    with pytest.raises(ValueError):
        RuntimeConfig()
    monkeypatch.setenv("APROX_CAP_BALL", "10")
    monkeypatch.setenv("APROX_LOG_LEVEL", "ruidoso")
    with pytest.raises(ValueError):
        RuntimeConfig()
    assert isinstance(InputError("x"), ValueError)


def test_runtime_config_reads_the_time_budget(monkeypatch):
    monkeypatch.delenv("APROX_CAP_BALL", raising=False)
    monkeypatch.delenv("APROX_LOG_LEVEL", raising=False)
    monkeypatch.delenv("APROX_TIME_BUDGET", raising=False)
    assert RuntimeConfig().caps.time_budget is None
    monkeypatch.setenv("APROX_TIME_BUDGET", "2.5")
    config = RuntimeConfig()
    assert config.caps.time_budget == 2.5
    assert config.with_overrides(time_budget=0.5).caps.time_budget == 0.5
    with pytest.raises(ValueError):
        config.with_overrides(time_budget=0)
    monkeypatch.setenv("APROX_TIME_BUDGET", "pronto")
    with pytest.raises(ValueError):
        RuntimeConfig()


def test_caps_clock_raises_after_the_deadline():
    assert Caps().start_clock() == Caps()
    running = Caps(time_budget=60).start_clock()
    running.check_time("norm_ball")
    expired = Caps(time_budget=1, deadline=time.monotonic() - 1)
    with pytest.raises(CapExceededError) as info:
        expired.check_time("norm_ball")
    assert info.value.stage == "norm_ball"
    assert info.value.cap == 1
    assert info.value.reached >= 2
