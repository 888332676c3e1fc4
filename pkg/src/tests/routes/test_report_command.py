import json
import os

import pytest


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_report_matches_checked_in_golden(cli, n):
    code, payload = cli("report", "--n", str(n), "--check-golden")
    assert code == 0
    assert payload["golden_matches"] is True
    assert payload["report"]["agreement"] is True


def test_report_contents(cli):
    code, payload = cli("report", "--n", "3")
    assert code == 0
    assert payload["multidegrees"]["formula"] == [1, 3, 3, 1]
    assert payload["segre"]["formula"] == [-28, 6]
    assert payload["segre"]["closed_forms"] == {"2": 6, "3": -28}
    assert payload["base_components"] == 6
    assert payload["chow_ranks"] == [[0, 1], [1, 6]]
    assert payload["agreement"] is True


def test_report_in_the_plane_has_no_chow_ranks(cli):
    code, payload = cli("report", "--n", "2")
    assert payload["chow_ranks"] == "not applicable"


def test_regenerate_golden_writes_file(cli, golden_dir):
    code, payload = cli("report", "--n", "4", "--regenerate-golden")
    assert code == 0
    written = json.loads((golden_dir / "report_n4.json").read_text(encoding="utf-8"))
    assert written == payload
    code, checked = cli("report", "--n", "4", "--check-golden")
    assert code == 0
    assert checked["golden_matches"] is True


def test_regenerated_golden_is_byte_identical_to_checked_in_one(cli, golden_dir):
    cli("report", "--n", "3", "--regenerate-golden")
    checked_in = os.path.join(os.path.dirname(__file__), "..", "..", "goldens", "report_n3.json")
    with open(checked_in, "r", encoding="utf-8") as f:
        assert (golden_dir / "report_n3.json").read_text(encoding="utf-8") == f.read()


def test_golden_mismatch_exits_with_one(cli, golden_dir):
    golden_dir.mkdir()
    code, payload = cli("report", "--n", "2")
    payload["base_components"] = 4
    (golden_dir / "report_n2.json").write_text(json.dumps(payload), encoding="utf-8")
    code, checked = cli("report", "--n", "2", "--check-golden")
    assert code == 1
    assert checked["golden_matches"] is False
    assert checked["report"]["base_components"] == 3


def test_missing_golden(cli, golden_dir, mocker):
    log_warning = mocker.patch("routes.logger.warning")
    code, payload = cli("report", "--n", "5", "--check-golden")
    assert code == 2
    assert payload["details"] == {"path": str(golden_dir / "report_n5.json")}
    assert "present for []" in log_warning.call_args.args[0]


def test_golden_only_kept_for_small_n(cli, golden_dir):
    code, payload = cli("report", "--n", "6", "--check-golden")
    assert code == 2
    assert "No golden report" in payload["error"]
    code, payload = cli("report", "--n", "6", "--regenerate-golden")
    assert code == 2
    assert not golden_dir.exists()
