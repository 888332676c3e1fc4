"""
Mixed-volume coefficients by polarization, and the three computation paths
for the multidegrees of the standard Cremona transformation.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from utils import polytope
from utils.exact_core import binomial, poly_coefficient
from utils.guards import DeskGuard

logger = logging.getLogger(__name__)

METHODS = ("formula", "mixed-volume", "extraction")


@dataclass(frozen=True)
class MixedVolumeQuery:
    """n bodies P_1..P_n in R^n; the query is the nu_1...nu_n coefficient of Vol(sum nu_i P_i)."""

    dimension: int
    bodies: tuple

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"MixedVolumeQuery dimension must be positive (got {self.dimension})")
        bodies = tuple(self.bodies)
        if len(bodies) != self.dimension:
            raise ValueError(f"MixedVolumeQuery needs exactly {self.dimension} bodies (got {len(bodies)})")
        for body in bodies:
            if body.dimension != self.dimension:
                raise ValueError(f"Dimension mismatch: body of dimension {body.dimension} in a {self.dimension}-dimensional query")
        object.__setattr__(self, "bodies", bodies)


def _simplex_kind(body, simplex, negative) -> str:
    if body == simplex:
        return "+"
    if body == negative:
        return "-"
    return None


def mixed_coefficient(q: MixedVolumeQuery) -> Fraction:
    """
    Coefficient of nu_1 ... nu_n in Vol(nu_1 P_1 + ... + nu_n P_n).

    Computed as the sum over non-empty S of (-1)^(n-|S|) Vol(sum_{i in S} P_i),
    in subset-lexicographic order. When every body is delta_n or -delta_n the
    inner volumes come from the closed form; otherwise from the triangulation
    oracle.
    """
    n = q.dimension
    DeskGuard().check("polarization_n", n, "polarization sum out of desk range")
    simplex = polytope.standard_simplex(n)
    negative = polytope.negate(simplex)
    kinds = [_simplex_kind(body, simplex, negative) for body in q.bodies]
    fast_path = all(kind is not None for kind in kinds)

    # Bodies are keyed by their first occurrence so equal multisets share one Minkowski sum.
    representative = []
    for body in q.bodies:
        representative.append(next(i for i, other in enumerate(q.bodies) if other == body))

    volumes = {}
    sums = {}
    total = Fraction(0)
    subsets = 0
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            subsets += 1
            if fast_path:
                alpha = sum(1 for i in subset if kinds[i] == "+")
                key = (alpha, size - alpha)
                if key not in volumes:
                    volumes[key] = polytope.volume_closed_form(key[0], key[1], n)
            else:
                key = tuple(sorted(representative[i] for i in subset))
                if key not in volumes:
                    volumes[key] = polytope.volume(_subset_sum(key, q.bodies, sums))
            total += (-1) ** (n - size) * volumes[key]
    logger.debug(f"Polarization over {subsets} subsets ({'closed form' if fast_path else 'oracle'}), "
                 f"{len(volumes)} distinct volumes")
    return total


def _subset_sum(key: tuple, bodies: tuple, cache: dict):
    if key in cache:
        return cache[key]
    if len(key) == 1:
        result = bodies[key[0]]
    else:
        result = polytope.minkowski_sum(_subset_sum(key[:-1], bodies, cache), bodies[key[-1]])
    cache[key] = result
    return result


def _check_index(n: int, k: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1 (got {n})")
    if k < 0 or k > n:
        raise ValueError(f"k must satisfy 0 <= k <= n (got k={k}, n={n})")


def _as_integer(value: Fraction, label: str) -> int:
    if value.denominator != 1:
        raise ValueError(f"{label} is not an integer: {value}")
    return value.numerator


def multidegree_by_mixed_volume(n: int, k: int) -> int:
    """d_k as the mixed coefficient of k copies of delta_n and n-k copies of -delta_n."""
    _check_index(n, k)
    simplex = polytope.standard_simplex(n)
    negative = polytope.negate(simplex)
    bodies = (simplex,) * k + (negative,) * (n - k)
    return _as_integer(mixed_coefficient(MixedVolumeQuery(n, bodies)), f"d_{k} (n={n})")


def multidegree_by_coefficient_extraction(n: int, k: int) -> int:
    """d_k = k! (n-k)! times the a^k b^(n-k) coefficient of the volume polynomial."""
    _check_index(n, k)
    coefficient = poly_coefficient(polytope.volume_polynomial(n), k, n - k)
    return _as_integer(math.factorial(k) * math.factorial(n - k) * coefficient, f"d_{k} (n={n})")


def multidegrees_by_method(n: int, method: str) -> list:
    if method == "formula":
        if n < 1:
            raise ValueError(f"n must be >= 1 (got {n})")
        return [binomial(n, k) for k in range(n + 1)]
    if method == "mixed-volume":
        return [multidegree_by_mixed_volume(n, k) for k in range(n + 1)]
    if method == "extraction":
        return [multidegree_by_coefficient_extraction(n, k) for k in range(n + 1)]
    raise ValueError(f"Unknown multidegree method: {method!r} (expected one of {', '.join(METHODS)})")


def multidegrees_all_paths(n: int) -> dict:
    paths = {method.replace("-", "_"): multidegrees_by_method(n, method) for method in METHODS}
    paths["paths_agree"] = paths["formula"] == paths["mixed_volume"] == paths["extraction"]
    if not paths["paths_agree"]:
        logger.warning(f"Multidegree paths disagree for n={n}: {paths}")
    return paths
