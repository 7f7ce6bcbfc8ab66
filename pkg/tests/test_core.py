import io
import json
import logging

import pytest

from app.core.config import Settings
from app.core.exceptions import BadParameterCount, GraphValidationError, \
    NumericError, ParseError, PMGraphError, PrecisionLoss, SingularMatrix
from app.core.logger import CustomJsonFormatter, PlainFormatter, \
    get_formatter
from app.middleware.logging_middleware import log_invocation


def test_settings_read_prefixed_environment(monkeypatch):
    monkeypatch.setenv("PMG_DEFAULT_MODE", "machine")
    monkeypatch.setenv("PMG_BIGFLOAT_DIGITS", "50")
    config = Settings()
    assert config.DEFAULT_MODE == "machine"
    assert config.BIGFLOAT_DIGITS == 50


def test_settings_reject_low_bigfloat_precision(monkeypatch):
    monkeypatch.setenv("PMG_BIGFLOAT_DIGITS", "12")
    with pytest.raises(ValueError):
        Settings()


@pytest.mark.parametrize("error, code", [
    (BadParameterCount("x"), 2),
    (ParseError("x", field="edges.0.u"), 3),
    (SingularMatrix("x"), 4),
    (PrecisionLoss("x", residual=1.0), 4),
])
def test_exit_codes(error, code):
    assert isinstance(error, PMGraphError)
    assert error.exit_code == code


def test_error_families():
    assert issubclass(BadParameterCount, GraphValidationError)
    assert issubclass(PrecisionLoss, NumericError)
    error = ParseError("图文件格式错误", field="edges.0.u", line=4)
    assert "edges.0.u" in str(error) and "4" in str(error)
    assert error.context == {"field": "edges.0.u", "line": 4}


def test_json_formatter_adds_context():
    stream = io.StringIO()
    handler = logging.StreamHandler(stream)
    handler.setFormatter(get_formatter("json"))
    log = logging.getLogger("tests.json")
    log.addHandler(handler)
    log.setLevel(logging.INFO)
    try:
        log.info("调用开始", extra={"run_id": "abc", "vertices": 4})
    finally:
        log.removeHandler(handler)
    record = json.loads(stream.getvalue())
    assert record["message"] == "调用开始"
    assert record["run_id"] == "abc"
    assert record["vertices"] == 4
    assert record["app"] == "pmgraph"
    assert isinstance(handler.formatter, CustomJsonFormatter)


def test_plain_formatter_for_files():
    assert isinstance(get_formatter("text"), PlainFormatter)


def test_log_invocation_success(caplog):
    with caplog.at_level(logging.INFO):
        with log_invocation("compute", mode="exact") as ctx:
            ctx.extra["graphs"] = 2
    messages = [r.getMessage() for r in caplog.records]
    assert messages == ["调用开始", "调用完成"]
    assert caplog.records[1].graphs == 2
    assert caplog.records[1].run_id == ctx.run_id


def test_log_invocation_reraises(caplog):
    with caplog.at_level(logging.INFO):
        with pytest.raises(SingularMatrix):
            with log_invocation("compute"):
                raise SingularMatrix("矩阵奇异")
    failure = caplog.records[-1]
    assert failure.getMessage() == "调用异常"
    assert failure.error_type == "SingularMatrix"
