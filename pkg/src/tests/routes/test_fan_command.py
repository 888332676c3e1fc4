def test_fan_count(cli):
    assert cli("fan", "--n", "3") == (0, {"n": 3, "cells": 12})


def test_fan_list(cli):
    code, payload = cli("fan", "--n", "2", "--action", "list")
    assert code == 0
    pairs = [cell["pair"] for cell in payload["cells"]]
    assert pairs == [[0, 1], [0, 2], [1, 0], [1, 2], [2, 0], [2, 1]]
    for cell in payload["cells"]:
        assert cell["inequalities"]
        assert all(set(row) == {"normal", "offset"} for row in cell["inequalities"])


def test_fan_cover_check(cli):
    code, payload = cli("fan", "--n", "2", "--action", "cover-check")
    assert code == 0
    assert payload == {"n": 2, "cells_volume": "4", "box_volume": "4", "covers": True}


def test_fan_guards(cli):
    code, payload = cli("fan", "--n", "5")
    assert code == 2
    assert payload["details"]["guard"] == "refinement_n"
    code, payload = cli("fan", "--n", "4", "--action", "cover-check")
    assert code == 2
    assert payload["details"]["guard"] == "covering_n"


def test_fan_needs_n_at_least_two(cli):
    code, payload = cli("fan", "--n", "1")
    assert code == 2
    assert payload["details"] is None
