import json
from fractions import Fraction

import pytest

import routes
from app import CommandRequest, UsageError, parse_request, run


def test_parse_request():
    request = parse_request(["--format", "csv", "--verbose", "segre", "--n", "4", "--check-hypergeometric"])
    assert request.subcommand == "segre"
    assert request.output_format == "csv"
    assert request.verbose is True
    assert request.parameters == {"n": 4, "check_hypergeometric": True}


def test_parse_request_keeps_negative_values():
    request = parse_request(["convert", "--segre", "-37,7", "--n", "3", "--deg", "3"])
    assert request.parameters["segre"] == "-37,7"
    request = parse_request(["volume", "--a", "-1/2", "--b", "1", "--n", "2"])
    assert request.parameters["a"] == Fraction(-1, 2)
    with pytest.raises(UsageError):
        parse_request(["convert", "--segre", "-x", "--deg", "3"])


def test_parse_request_without_subcommand():
    with pytest.raises(UsageError):
        parse_request([])


def test_command_request_validation():
    with pytest.raises(UsageError):
        CommandRequest("draw")
    with pytest.raises(UsageError):
        CommandRequest("segre", {"n": 3}, "yaml")


def test_run_returns_code_and_rendered_payload():
    code, output = run(CommandRequest("segre", {"n": 4}))
    assert code == 0
    assert json.loads(output) == {"n": 4, "segre": [255, -60, 10]}


def test_unexpected_errors_exit_with_one(mocker):
    mocker.patch.dict(routes.ROUTES, {"segre": mocker.Mock(side_effect=RuntimeError("boom"))})
    log_error = mocker.patch("app.logger.error")
    code, output = run(CommandRequest("segre", {"n": 3}))
    assert code == 1
    assert json.loads(output)["error"] == "Unexpected error: boom"
    assert log_error.call_args.kwargs["exc_info"] is True


def test_bad_guard_configuration_is_a_usage_error(monkeypatch):
    monkeypatch.setenv("CREMONA_DESK_GUARD", "zero")
    code, output = run(CommandRequest("minors", {"standard": 2}))
    assert code == 2
    assert "CREMONA_DESK_GUARD" in json.loads(output)["error"]


def test_jsonable_stringifies_big_integers_and_fractions():
    assert routes.jsonable({"a": [2 ** 63, -(2 ** 63) + 1, Fraction(-3, 6)]}) == {"a": [str(2 ** 63), str(-(2 ** 63) + 1), "-1/2"]}
    assert routes.jsonable([[1, 2], [2 ** 64, 3]]) == [[1, 2], [str(2 ** 64), "3"]]
    assert routes.jsonable((True, 2 ** 63)) == [True, str(2 ** 63)]
    with pytest.raises(ValueError):
        routes.jsonable(object())
