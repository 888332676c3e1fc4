import json
import os
import sys

import pytest

# Modules are imported as `from utils.x import ...` with src/ on the path.
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from app import main  # noqa: E402
from datastore import clear_cache  # noqa: E402


@pytest.fixture(autouse=True)
def isolate_environment(monkeypatch):
    """Each test starts with default guards, default log level and an empty golden cache."""
    for name in ("CREMONA_DESK_GUARD", "CREMONA_LOG_LEVEL", "CREMONA_GOLDEN_DIR"):
        monkeypatch.delenv(name, raising=False)
    clear_cache()
    yield
    clear_cache()


@pytest.fixture()
def golden_dir(tmp_path, monkeypatch):
    directory = tmp_path / "goldens"
    monkeypatch.setenv("CREMONA_GOLDEN_DIR", str(directory))
    return directory


@pytest.fixture()
def write_json(tmp_path):
    """Writes a JSON document under tmp_path and returns its path."""
    def _write(name, document):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)
    return _write


@pytest.fixture()
def cli(capsys):
    """Runs the command line; returns (exit code, parsed JSON payload or raw text)."""
    def _run(*args):
        code = main(list(args))
        out = capsys.readouterr().out
        if "--format" in args and args[args.index("--format") + 1] != "json":
            return code, out.rstrip("\n")
        return code, json.loads(out)
    return _run
