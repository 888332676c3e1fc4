# src/datastore.py
import json
import logging
import os

logger = logging.getLogger(__name__)

GOLDEN_NS = (2, 3, 4, 5)

golden_cache = {}  # n -> loaded report payload


def golden_dir() -> str:
    return os.getenv("CREMONA_GOLDEN_DIR") or os.path.join(os.path.dirname(os.path.abspath(__file__)), "goldens")


def golden_path(n: int) -> str:
    return os.path.join(golden_dir(), f"report_n{n}.json")


def golden_exists(n: int) -> bool:
    return os.path.isfile(golden_path(n))


def load_golden(n: int):
    """Returns the stored report payload for n, or None when no golden file exists."""
    path = golden_path(n)
    if path in golden_cache:
        return golden_cache[path]
    if not os.path.isfile(path):
        return None
    with open(path, "r", encoding="utf-8") as f:
        payload = json.load(f)
    golden_cache[path] = payload
    return payload


def write_golden(n: int, payload: dict) -> str:
    if n not in GOLDEN_NS:
        raise ValueError(f"Golden files are kept for n in {list(GOLDEN_NS)} (got {n})")
    path = golden_path(n)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(payload, indent=2) + "\n")
    golden_cache[path] = payload
    logger.info(f"Wrote golden report {path}")
    return path


def list_goldens() -> list:
    return [n for n in GOLDEN_NS if golden_exists(n)]


def clear_cache():
    golden_cache.clear()
