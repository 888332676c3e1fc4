NAMES = ["volume_oracle", "multidegree_paths", "segre_consistency", "standard_minors",
         "worked_example", "base_locus", "fan"]


def test_verify_passes(cli):
    code, payload = cli("verify", "--max-n", "3")
    assert code == 0
    assert payload["passed"] is True
    assert [check["name"] for check in payload["checks"]] == NAMES
    assert all(check["status"] == "pass" and check["counterexample"] is None for check in payload["checks"])


def test_verify_ranges(cli):
    code, payload = cli("verify", "--max-n", "2")
    ranges = {check["name"]: check["n_range"] for check in payload["checks"]}
    assert ranges == {
        "volume_oracle": [1, 2],
        "multidegree_paths": [2, 2],
        "segre_consistency": [2, 2],
        "standard_minors": [1, 2],
        "worked_example": [],
        "base_locus": [2, 2],
        "fan": [2, 2],
    }


def test_verify_rejects_small_max_n(cli):
    code, payload = cli("verify", "--max-n", "1")
    assert code == 2
    assert "max_n >= 2" in payload["error"]
