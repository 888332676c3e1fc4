"""
One handler per subcommand, plus payload rendering for the json, csv and
plain output formats.

Handlers take the parsed parameters and return (payload, exit code).
"""
import csv
import errno
import io
import json
import logging
from fractions import Fraction

from datastore import GOLDEN_NS, golden_exists, golden_path, list_goldens, load_golden, write_golden
from utils import cremona, fan, mixed_volume, polytope
from utils.exact_core import format_rational
from verify import verify

logger = logging.getLogger(__name__)

INT64_LIMIT = 2 ** 63


class MalformedJsonError(ValueError):
    def __init__(self, path: str, line: int, message: str):
        self.path = path
        self.line = line
        super().__init__(f"Malformed JSON in {path} at line {line}: {message}")


def _read_json(path: str):
    with open(path, "r", encoding="utf-8") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise MalformedJsonError(path, e.lineno, e.msg)


def _parse_integers(text: str, label: str) -> list:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise ValueError(f"{label} must be a comma-separated list of integers (got {text!r})")


def _is_integer(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def jsonable(value):
    """
    Fractions become "p/q" strings and integers outside the signed 64-bit range become strings.

    A sequence holding any such integer has all of its integers written as strings.
    """
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value) if abs(value) >= INT64_LIMIT else value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        if any(_is_integer(v) and abs(v) >= INT64_LIMIT for v in value):
            return [str(v) if _is_integer(v) else jsonable(v) for v in value]
        return [jsonable(v) for v in value]
    if isinstance(value, cremona.SparsePolynomial):
        return repr(value)
    raise ValueError(f"Cannot serialise value of type {type(value).__name__}")


# Handlers

def handle_multidegrees(params: dict):
    n = params["n"]
    method = params.get("method") or "all"
    if method == "all":
        paths = mixed_volume.multidegrees_all_paths(n)
        return {"n": n, "degrees": paths["formula"], "paths_agree": paths["paths_agree"]}, 0
    return {"n": n, "method": method, "degrees": mixed_volume.multidegrees_by_method(n, method)}, 0


def handle_segre(params: dict):
    n = params["n"]
    s = cremona.segre_numbers_standard(n)
    payload = {"n": n, "segre": list(s.numbers)}
    if params.get("check_hypergeometric"):
        hypergeometric = cremona.segre_numbers_hypergeometric(n)
        payload["hypergeometric"] = list(hypergeometric.numbers)
        payload["hypergeometric_agrees"] = hypergeometric == s
    return payload, 0


def handle_convert(params: dict):
    degree = params["deg"]
    if params.get("degrees") is not None:
        values = _parse_integers(params["degrees"], "--degrees")
        if len(values) < 2:
            raise ValueError("--degrees needs at least d_0 and d_1")
        d = cremona.MultidegreeSequence(len(values) - 1, tuple(values), degree)
        if params.get("inverse"):
            inverse = cremona.inverse_multidegrees(d)
            return {"degrees": list(inverse.degrees), "deg": inverse.algebraic_degree}, 0
        return {"segre": list(cremona.segre_from_multidegrees(d).numbers)}, 0
    if params.get("inverse"):
        raise ValueError("--inverse applies to --degrees only")
    if params.get("n") is None:
        raise ValueError("--segre needs --n")
    values = _parse_integers(params["segre"], "--segre")
    s = cremona.SegreVector(params["n"], tuple(values))
    return {"degrees": list(cremona.multidegrees_from_segre(s, degree).degrees)}, 0


def handle_volume(params: dict):
    if params.get("polytope"):
        body = polytope.load_polytope(_read_json(params["polytope"]))
        return {"volume": polytope.volume(body)}, 0
    missing = [flag for flag in ("a", "b", "n") if params.get(flag) is None]
    if missing:
        raise ValueError(f"volume needs --polytope or all of --a, --b, --n (missing {', '.join('--' + m for m in missing)})")
    a, b, n = params["a"], params["b"], params["n"]
    if params.get("oracle"):
        simplex = polytope.standard_simplex(n)
        body = polytope.minkowski_sum(polytope.dilate(simplex, a), polytope.dilate(polytope.negate(simplex), b))
        return {"volume": polytope.volume(body)}, 0
    return {"volume": polytope.volume_closed_form(a, b, n)}, 0


def handle_mixed_volume(params: dict):
    paths = [path for value in params["polytopes"] for path in value.split(",") if path]
    if not paths:
        raise ValueError("--polytopes needs at least one file")
    bodies = [polytope.load_polytope(_read_json(path)) for path in paths]
    query = mixed_volume.MixedVolumeQuery(bodies[0].dimension, tuple(bodies))
    return {"mixed_coefficient": mixed_volume.mixed_coefficient(query)}, 0


def handle_minors(params: dict):
    if params.get("matrix"):
        m = cremona.load_matrix(_read_json(params["matrix"]))
    elif params.get("standard") is not None:
        m = cremona.standard_matrix(params["standard"])
    else:
        m = cremona.example_matrix()
    return {"n": m.n, "minors": cremona.maximal_minors(m)}, 0


def handle_fan(params: dict):
    n = params["n"]
    action = params.get("action") or "count"
    if action == "count":
        return {"n": n, "cells": len(fan.common_refinement(n))}, 0
    if action == "list":
        return {"n": n, "cells": [fan.cell_to_json(cell) for cell in fan.common_refinement(n)]}, 0
    covered, box = fan.covering_check(n)
    return {"n": n, "cells_volume": covered, "box_volume": box, "covers": covered == box}, 0


def handle_report(params: dict):
    n = params["n"]
    payload = jsonable(cremona.segre_report(n))
    if params.get("regenerate_golden"):
        write_golden(n, payload)
    if params.get("check_golden"):
        if n not in GOLDEN_NS:
            raise ValueError(f"No golden report is kept for n={n} (kept for {list(GOLDEN_NS)})")
        if not golden_exists(n):
            logger.warning(f"Golden report for n={n} is missing (present for {list_goldens()})")
            raise FileNotFoundError(errno.ENOENT, f"Golden report for n={n} is missing", golden_path(n))
        golden = load_golden(n)
        if golden != payload:
            logger.warning(f"Report for n={n} differs from its golden file")
            return {"n": n, "golden_matches": False, "report": payload}, 1
        return {"n": n, "golden_matches": True, "report": payload}, 0
    return payload, 0


def handle_verify(params: dict):
    report = verify(params.get("max_n") or 5)
    return report.to_payload(), report.exit_code


ROUTES = {
    "multidegrees": handle_multidegrees,
    "segre": handle_segre,
    "convert": handle_convert,
    "volume": handle_volume,
    "mixed-volume": handle_mixed_volume,
    "minors": handle_minors,
    "fan": handle_fan,
    "report": handle_report,
    "verify": handle_verify,
}


# Rendering

def _flatten(prefix: str, value, index: list, rows: list) -> None:
    if isinstance(value, dict):
        for key, item in value.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), item, index, rows)
    elif isinstance(value, list):
        for i, item in enumerate(value):
            _flatten(prefix, item, index + [str(i)], rows)
    else:
        rows.append((prefix, ".".join(index), _scalar_text(value)))


def _scalar_text(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    return str(value)


def render_json(payload) -> str:
    return json.dumps(jsonable(payload), indent=2)


def render_csv(payload) -> str:
    rows = []
    _flatten("", jsonable(payload), [], rows)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["field", "index", "value"])
    writer.writerows(rows)
    return buffer.getvalue().rstrip("\n")


def _plain_value(value) -> str:
    if isinstance(value, list) and all(not isinstance(v, (list, dict)) for v in value):
        return ",".join(_scalar_text(v) for v in value)
    if isinstance(value, (list, dict)):
        return json.dumps(value, separators=(",", ":"))
    return _scalar_text(value)


def render_plain(payload) -> str:
    data = jsonable(payload)
    if not isinstance(data, dict):
        return _plain_value(data)
    if len(data) == 1:
        return _plain_value(next(iter(data.values())))
    return "\n".join(f"{key}: {_plain_value(value)}" for key, value in data.items())


RENDERERS = {
    "json": render_json,
    "csv": render_csv,
    "plain": render_plain,
}
