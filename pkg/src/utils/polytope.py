"""
Rational polytopes in V- and H-representation.

Volumes are Euclidean, normalised so that the standard simplex has volume
1/n!. The general oracle triangulates by pulling from the lexicographically
least vertex; the closed form and the orthant decomposition cover the
family a*delta_n + b*(-delta_n) at any n.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from utils.exact_core import BivariatePolynomial, binomial, format_rational, parse_rational, to_rational
from utils.guards import DeskGuard
from utils.lp import HPolyhedron, is_extreme

logger = logging.getLogger(__name__)


def _as_point(values) -> tuple:
    return tuple(to_rational(x) for x in values)


def _canonical_points(dimension: int, vertices) -> tuple:
    if dimension < 1:
        raise ValueError(f"VPolytope dimension must be positive (got {dimension})")
    points = sorted({_as_point(v) for v in vertices})
    if not points:
        raise ValueError("VPolytope needs at least one vertex")
    if any(len(v) != dimension for v in points):
        raise ValueError(f"Every vertex must have {dimension} coordinates")
    return tuple(points)


@dataclass(frozen=True)
class VPolytope:
    """Convex hull of `vertices`; vertices are extreme and sorted lexicographically."""

    dimension: int
    vertices: tuple

    def __post_init__(self):
        points = _canonical_points(self.dimension, self.vertices)
        for index, point in enumerate(points):
            if not is_extreme(point, points[:index] + points[index + 1:]):
                raise ValueError(f"{[format_rational(x) for x in point]} is not a vertex; use VPolytope.from_points for hulls")
        object.__setattr__(self, "vertices", points)

    @classmethod
    def _from_extreme_points(cls, dimension: int, points) -> "VPolytope":
        # Callers guarantee every point is extreme, so the LP check is skipped.
        body = cls.__new__(cls)
        object.__setattr__(body, "dimension", dimension)
        object.__setattr__(body, "vertices", _canonical_points(dimension, points))
        return body

    @classmethod
    def from_points(cls, dimension: int, points: Sequence) -> "VPolytope":
        """Canonicalising constructor: deduplicate, keep extreme points, sort."""
        candidates = sorted({_as_point(p) for p in points})
        if not candidates:
            raise ValueError("VPolytope needs at least one point")
        certified = _certified_extreme(candidates)
        kept = []
        for index, point in enumerate(candidates):
            if index in certified:
                kept.append(point)
                continue
            others = candidates[:index] + candidates[index + 1:]
            if is_extreme(point, others):
                kept.append(point)
        logger.debug(f"from_points kept {len(kept)} of {len(candidates)} candidates ({len(certified)} certified without LP)")
        return cls._from_extreme_points(dimension, kept)


def _certified_extreme(points: list) -> set:
    """Indices that uniquely maximise a coordinate direction (hence are vertices)."""
    certified = set()
    dimension = len(points[0])
    directions = []
    for t in range(dimension):
        for sign in (1, -1):
            directions.append(tuple(sign if s == t else 0 for s in range(dimension)))
    directions.append((1,) * dimension)
    directions.append((-1,) * dimension)
    for w in directions:
        values = [sum(x * y for x, y in zip(w, p)) for p in points]
        best = max(values)
        winners = [i for i, v in enumerate(values) if v == best]
        if len(winners) == 1:
            certified.add(winners[0])
    if len(points) == 1:
        certified.add(0)
    return certified


def standard_simplex(n: int) -> VPolytope:
    """delta_n: the origin and the n standard basis points."""
    if n < 1:
        raise ValueError(f"standard_simplex needs n >= 1 (got {n})")
    origin = (0,) * n
    basis = [tuple(1 if s == t else 0 for s in range(n)) for t in range(n)]
    return VPolytope._from_extreme_points(n, [origin] + basis)


def negate(p: VPolytope) -> VPolytope:
    return VPolytope._from_extreme_points(p.dimension, [tuple(-x for x in v) for v in p.vertices])


def dilate(p: VPolytope, c) -> VPolytope:
    c = to_rational(c)
    if c < 0:
        raise ValueError(f"dilate needs a non-negative factor (got {format_rational(c)}); compose with negate instead")
    if c == 0:
        return VPolytope._from_extreme_points(p.dimension, [(0,) * p.dimension])
    return VPolytope._from_extreme_points(p.dimension, [tuple(c * x for x in v) for v in p.vertices])


def translate(p: VPolytope, t: Sequence) -> VPolytope:
    t = _as_point(t)
    if len(t) != p.dimension:
        raise ValueError(f"Translation vector has length {len(t)}, expected {p.dimension}")
    return VPolytope._from_extreme_points(p.dimension, [tuple(x + y for x, y in zip(v, t)) for v in p.vertices])


def minkowski_sum(p: VPolytope, q: VPolytope) -> VPolytope:
    """Convex hull of all pairwise vertex sums, reduced to its vertices."""
    if p.dimension != q.dimension:
        raise ValueError(f"Dimension mismatch: {p.dimension} and {q.dimension}")
    sums = [tuple(x + y for x, y in zip(u, v)) for u in p.vertices for v in q.vertices]
    return VPolytope.from_points(p.dimension, sums)


# -- integer helpers for the volume oracle --------------------------------

def _integer_points(points: Sequence) -> tuple:
    """Scales rational points to integers; returns (points, scale)."""
    scale = 1
    for point in points:
        for x in point:
            scale = math.lcm(scale, to_rational(x).denominator)
    scaled = [tuple(int(to_rational(x) * scale) for x in point) for point in points]
    return scaled, scale


def _reduce(vector: list) -> list:
    g = 0
    for x in vector:
        g = math.gcd(g, x)
    if g > 1:
        return [x // g for x in vector]
    return vector


def _row_echelon(rows: list, width: int) -> tuple:
    """Fraction-free Gauss-Jordan over the integers; returns (rows, pivot columns)."""
    matrix = [list(r) for r in rows]
    pivots = []
    rank = 0
    for column in range(width):
        if rank == len(matrix):
            break
        pivot = next((i for i in range(rank, len(matrix)) if matrix[i][column] != 0), None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        pivot_row = matrix[rank]
        pivot_value = pivot_row[column]
        for i in range(len(matrix)):
            if i != rank and matrix[i][column] != 0:
                factor = matrix[i][column]
                matrix[i] = _reduce([pivot_value * x - factor * y for x, y in zip(matrix[i], pivot_row)])
        pivots.append(column)
        rank += 1
    return matrix[:rank], pivots


def _integer_kernel(rows: list, width: int) -> list:
    """Integer basis of {x : r . x = 0 for every row r}."""
    echelon, pivots = _row_echelon(rows, width)
    scale = 1
    for i, column in enumerate(pivots):
        scale = math.lcm(scale, abs(echelon[i][column]))
    kernel = []
    for free in range(width):
        if free in pivots:
            continue
        vector = [0] * width
        vector[free] = scale
        for i, column in enumerate(pivots):
            vector[column] = -echelon[i][free] * scale // echelon[i][column]
        kernel.append(_reduce(vector))
    return kernel


def _integer_determinant(matrix: list) -> int:
    """Bareiss fraction-free determinant."""
    m = [list(r) for r in matrix]
    size = len(m)
    sign = 1
    previous = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // previous
        previous = m[k][k]
    return sign * m[size - 1][size - 1]


def affine_rank(points: Sequence) -> int:
    """Dimension of the affine hull of `points` (-1 for no points)."""
    if not points:
        return -1
    scaled, _ = _integer_points(points)
    base = scaled[0]
    differences = [[x - y for x, y in zip(q, base)] for q in scaled[1:]]
    if not differences:
        return 0
    echelon, _ = _row_echelon(differences, len(base))
    return len(echelon)


def _facet_hyperplanes(points: list) -> list:
    """
    Facets of the hull of full-dimensional integer points in R^d, d >= 2.

    Exhaustive search over affinely independent d-subsets: the first d-1
    points fix a 2-dimensional space of candidate normals, the last point
    fixes the normal. A hyperplane is a facet when every point lies on one
    side. Returns (primitive normal, offset, member indices), oriented so
    that normal . x <= offset on the hull.
    """
    dimension = len(points[0])
    count = len(points)
    found = {}
    for prefix in itertools.combinations(range(count), dimension - 1):
        if prefix[-1] == count - 1:
            continue
        base = points[prefix[0]]
        rows = [[x - y for x, y in zip(points[i], base)] for i in prefix[1:]]
        kernel = _integer_kernel(rows, dimension)
        if len(kernel) != 2:
            continue
        k1, k2 = kernel
        for last in range(prefix[-1] + 1, count):
            difference = [x - y for x, y in zip(points[last], base)]
            alpha = sum(x * y for x, y in zip(k2, difference))
            beta = sum(x * y for x, y in zip(k1, difference))
            normal = [alpha * x - beta * y for x, y in zip(k1, k2)]
            if not any(normal):
                continue
            offset = sum(x * y for x, y in zip(normal, base))
            side = 0
            for q in points:
                s = sum(x * y for x, y in zip(normal, q)) - offset
                if s > 0:
                    if side < 0:
                        side = None
                        break
                    side = 1
                elif s < 0:
                    if side > 0:
                        side = None
                        break
                    side = -1
            if side is None or side == 0:
                continue
            if side > 0:
                normal = [-x for x in normal]
                offset = -offset
            reduced = _reduce(normal + [offset])
            key = (tuple(reduced[:-1]), reduced[-1])
            if key not in found:
                members = tuple(i for i, q in enumerate(points)
                                if sum(x * y for x, y in zip(key[0], q)) == key[1])
                found[key] = members
    return [(normal, offset, members) for (normal, offset), members in sorted(found.items())]


def _pulling_triangulation(points: list) -> list:
    """Simplices (index tuples) of a pulling triangulation of full-dimensional integer points."""
    dimension = len(points[0])
    if dimension == 1:
        low = min(range(len(points)), key=lambda i: points[i][0])
        high = max(range(len(points)), key=lambda i: points[i][0])
        return [(low, high)]
    apex = min(range(len(points)), key=lambda i: points[i])
    simplices = []
    for normal, _offset, members in _facet_hyperplanes(points):
        if apex in members:
            continue
        dropped = next(t for t, x in enumerate(normal) if x != 0)
        projected = [points[i][:dropped] + points[i][dropped + 1:] for i in members]
        for simplex in _pulling_triangulation(projected):
            simplices.append((apex,) + tuple(members[k] for k in simplex))
    return simplices


def _check_vertex_guard(p: VPolytope) -> None:
    DeskGuard().check("volume_vertices", len(p.vertices), "general volume oracle out of desk range")


def facets(p: VPolytope) -> list:
    """Facets as (normal, offset, vertex indices) with normal . x <= offset on p."""
    _check_vertex_guard(p)
    if affine_rank(p.vertices) < p.dimension:
        return []
    scaled, scale = _integer_points(p.vertices)
    if p.dimension == 1:
        low = min(range(len(scaled)), key=lambda i: scaled[i][0])
        high = max(range(len(scaled)), key=lambda i: scaled[i][0])
        return [((Fraction(-1),), -p.vertices[low][0], (low,)), ((Fraction(1),), p.vertices[high][0], (high,))]
    return [(tuple(Fraction(x) for x in normal), Fraction(offset, scale), members)
            for normal, offset, members in _facet_hyperplanes(scaled)]


def triangulate(p: VPolytope) -> list:
    """Pulling triangulation from the lexicographically least vertex; [] if p is not full-dimensional."""
    _check_vertex_guard(p)
    if len(p.vertices) <= p.dimension or affine_rank(p.vertices) < p.dimension:
        return []
    scaled, _ = _integer_points(p.vertices)
    return _pulling_triangulation(scaled)


def volume(p: VPolytope) -> Fraction:
    """
    Euclidean n-volume by pulling triangulation.

    Returns 0 for polytopes of affine dimension < n.

    Raises:
        DeskGuardError: "general volume oracle out of desk range" when the
                        vertex count exceeds the volume_vertices guard.
    """
    _check_vertex_guard(p)
    if len(p.vertices) <= p.dimension or affine_rank(p.vertices) < p.dimension:
        return Fraction(0)
    scaled, scale = _integer_points(p.vertices)
    simplices = _pulling_triangulation(scaled)
    total = 0
    for simplex in simplices:
        apex = scaled[simplex[0]]
        edges = [[x - y for x, y in zip(scaled[i], apex)] for i in simplex[1:]]
        total += abs(_integer_determinant(edges))
    logger.debug(f"Volume oracle: {len(p.vertices)} vertices, {len(simplices)} simplices")
    return Fraction(total, math.factorial(p.dimension) * scale ** p.dimension)


def volume_closed_form(a, b, n: int) -> Fraction:
    """Vol(a delta_n + b(-delta_n)) = sum_j C(n,j) a^j b^(n-j) / (j! (n-j)!)."""
    a, b = to_rational(a), to_rational(b)
    if a < 0 or b < 0:
        raise ValueError(f"volume_closed_form needs a, b >= 0 (got {format_rational(a)}, {format_rational(b)})")
    if n < 1:
        raise ValueError(f"volume_closed_form needs n >= 1 (got {n})")
    return sum((Fraction(binomial(n, j) * a ** j * b ** (n - j), math.factorial(j) * math.factorial(n - j))
                for j in range(n + 1)), Fraction(0))


def volume_polynomial(n: int) -> BivariatePolynomial:
    """The polynomial in (a, b) whose value is volume_closed_form(a, b, n)."""
    if n < 1:
        raise ValueError(f"volume_polynomial needs n >= 1 (got {n})")
    return BivariatePolynomial({
        (j, n - j): Fraction(binomial(n, j), math.factorial(j) * math.factorial(n - j))
        for j in range(n + 1)
    })


@dataclass(frozen=True)
class OrthantCell:
    signs: tuple
    simplex_split: int
    cell_volume: Fraction


def orthant_decomposition(a, b, n: int) -> list:
    """
    The 2^n orthant pieces of a delta_n + b(-delta_n).

    The piece in the orthant with j plus-signs is a*delta_j x b*(-delta_(n-j)),
    of volume a^j b^(n-j) / (j! (n-j)!).
    """
    a, b = to_rational(a), to_rational(b)
    if a < 0 or b < 0:
        raise ValueError("orthant_decomposition needs a, b >= 0")
    if n < 1:
        raise ValueError(f"orthant_decomposition needs n >= 1 (got {n})")
    cells = []
    for signs in itertools.product("+-", repeat=n):
        j = signs.count("+")
        cell_volume = a ** j * b ** (n - j) / (math.factorial(j) * math.factorial(n - j))
        cells.append(OrthantCell(tuple(signs), j, Fraction(cell_volume)))
    return cells


def orthant_cell_polytope(signs: Sequence, a, b) -> VPolytope:
    """The piece of a delta_n + b(-delta_n) in the orthant given by `signs`."""
    a, b = to_rational(a), to_rational(b)
    n = len(signs)
    plus = [i for i, s in enumerate(signs) if s == "+"]
    minus = [i for i, s in enumerate(signs) if s == "-"]
    if len(plus) + len(minus) != n:
        raise ValueError(f"Signs must be '+' or '-' (got {signs!r})")
    positive_part = [None] + plus
    negative_part = [None] + minus
    points = []
    for i in positive_part:
        for k in negative_part:
            point = [Fraction(0)] * n
            if i is not None:
                point[i] = a
            if k is not None:
                point[k] = -b
            points.append(point)
    return VPolytope.from_points(n, points)


def difference_body_hrep(a, b, n: int) -> HPolyhedron:
    """a delta_n + b(-delta_n) as {sum_S x_i <= a, -sum_S x_i <= b for non-empty S}."""
    a, b = to_rational(a), to_rational(b)
    constraints = []
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            indicator = tuple(1 if t in subset else 0 for t in range(n))
            constraints.append((indicator, a))
            constraints.append((tuple(-x for x in indicator), b))
    return HPolyhedron(n, tuple(constraints))


def load_polytope(data: dict) -> VPolytope:
    """Reads { "dimension": n, "vertices": [["p/q", ...], ...] } (hull of the listed points)."""
    if not isinstance(data, dict) or "dimension" not in data or "vertices" not in data:
        raise ValueError("Polytope JSON needs 'dimension' and 'vertices'")
    dimension = data["dimension"]
    if not isinstance(dimension, int) or dimension < 1:
        raise ValueError(f"Polytope dimension must be a positive integer (got {dimension!r})")
    points = []
    for vertex in data["vertices"]:
        if not isinstance(vertex, list) or len(vertex) != dimension:
            raise ValueError(f"Vertex {vertex!r} does not have {dimension} coordinates")
        points.append(tuple(parse_rational(x) if isinstance(x, str) else to_rational(x) for x in vertex))
    return VPolytope.from_points(dimension, points)


def dump_polytope(p: VPolytope) -> dict:
    return {"dimension": p.dimension, "vertices": [[format_rational(x) for x in v] for v in p.vertices]}
