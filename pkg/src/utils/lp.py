"""
Exact rational linear programming (two-phase primal simplex, Bland's rule)
and the geometric predicates built on it.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from utils.exact_core import RationalMatrix, dot, gaussian_solve, to_rational

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"


def _as_point(values) -> tuple:
    return tuple(to_rational(x) for x in values)


@dataclass(frozen=True)
class HPolyhedron:
    """Polyhedron {x : normal . x <= offset for every constraint}."""

    dimension: int
    constraints: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"HPolyhedron dimension must be positive (got {self.dimension})")
        cleaned = []
        for normal, offset in self.constraints:
            normal = _as_point(normal)
            if len(normal) != self.dimension:
                raise ValueError(f"Constraint normal {normal} does not have length {self.dimension}")
            if all(x == 0 for x in normal):
                raise ValueError("HPolyhedron constraints may not have a zero normal vector")
            cleaned.append((normal, to_rational(offset)))
        object.__setattr__(self, "constraints", tuple(cleaned))

    def contains(self, point) -> bool:
        point = _as_point(point)
        return all(dot(normal, point) <= offset for normal, offset in self.constraints)

    def intersect(self, other: "HPolyhedron") -> "HPolyhedron":
        if other.dimension != self.dimension:
            raise ValueError(f"Dimension mismatch: {self.dimension} and {other.dimension}")
        return HPolyhedron(self.dimension, self.constraints + other.constraints)

    def negated(self) -> "HPolyhedron":
        """The image under x -> -x."""
        return HPolyhedron(self.dimension, tuple((tuple(-x for x in normal), offset)
                                                 for normal, offset in self.constraints))

    def with_box(self, radius=1) -> "HPolyhedron":
        """Intersection with the cube [-radius, radius]^n."""
        radius = to_rational(radius)
        box = []
        for t in range(self.dimension):
            for sign in (1, -1):
                box.append((tuple(sign if s == t else 0 for s in range(self.dimension)), radius))
        return HPolyhedron(self.dimension, self.constraints + tuple(box))


@dataclass(frozen=True)
class LinearProgram:
    """Maximize objective . x subject to normal . x <= offset; x is free."""

    objective: tuple
    constraints: tuple
    dimension: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"LinearProgram dimension must be positive (got {self.dimension})")
        objective = _as_point(self.objective)
        if len(objective) != self.dimension:
            raise ValueError(f"Objective has length {len(objective)}, expected {self.dimension}")
        cleaned = []
        for normal, offset in self.constraints:
            normal = _as_point(normal)
            if len(normal) != self.dimension:
                raise ValueError(f"Constraint normal {normal} does not have length {self.dimension}")
            cleaned.append((normal, to_rational(offset)))
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "constraints", tuple(cleaned))


@dataclass(frozen=True)
class LpOutcome:
    status: str
    witness: Optional[tuple] = None
    objective: Optional[Fraction] = None

    def __post_init__(self):
        if self.status not in (OPTIMAL, UNBOUNDED, INFEASIBLE):
            raise ValueError(f"Unknown LP status: {self.status}")
        if (self.witness is not None) != (self.status == OPTIMAL):
            raise ValueError("An LP witness is present exactly when the status is optimal")


def _sign_restricted(normal: tuple, offset: Fraction) -> Optional[int]:
    """Index i when the constraint reads -alpha * x_i <= 0 with alpha > 0."""
    if offset != 0:
        return None
    support = [i for i, x in enumerate(normal) if x != 0]
    if len(support) == 1 and normal[support[0]] < 0:
        return support[0]
    return None


def _pivot(tableau: list, basis: list, row: int, column: int) -> None:
    pivot_value = tableau[row][column]
    pivot_row = [x / pivot_value for x in tableau[row]]
    tableau[row] = pivot_row
    for r in range(len(tableau)):
        if r != row:
            factor = tableau[r][column]
            if factor != 0:
                tableau[r] = [x - factor * y for x, y in zip(tableau[r], pivot_row)]
    basis[row] = column


def _simplex(tableau: list, basis: list, cost: list, allowed: list) -> str:
    """Maximizes cost over the current basis using Bland's least-index rule."""
    pivots = 0
    while True:
        in_basis = set(basis)
        weighted_rows = [(i, cost[basis[i]]) for i in range(len(basis)) if cost[basis[i]] != 0]
        entering = None
        for j in range(len(cost)):
            if not allowed[j] or j in in_basis:
                continue
            reduced = cost[j] - sum((c * tableau[i][j] for i, c in weighted_rows), Fraction(0))
            if reduced > 0:
                entering = j
                break
        if entering is None:
            logger.debug(f"Simplex optimal after {pivots} pivots")
            return OPTIMAL
        leaving = None
        best_ratio = None
        for i, row in enumerate(tableau):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[leaving])):
                    best_ratio = ratio
                    leaving = i
        if leaving is None:
            logger.debug(f"Simplex unbounded after {pivots} pivots (column {entering})")
            return UNBOUNDED
        _pivot(tableau, basis, leaving, entering)
        pivots += 1


def solve(lp: LinearProgram) -> LpOutcome:
    """
    Solves a linear program exactly.

    Variables are free; a constraint -alpha * x_i <= 0 is read as the sign
    restriction x_i >= 0 instead of a tableau row. Other free variables are
    split as x = x+ - x-.

    Returns:
        LpOutcome: optimal (with witness and objective value), unbounded or
        infeasible.
    """
    dimension = lp.dimension
    nonnegative = set()
    rows = []
    for normal, offset in lp.constraints:
        index = _sign_restricted(normal, offset)
        if index is not None:
            nonnegative.add(index)
        else:
            rows.append((normal, offset))

    # Column layout: structural columns, then one slack per row, then artificials.
    column_of = []
    structural = 0
    for i in range(dimension):
        if i in nonnegative:
            column_of.append((structural, None))
            structural += 1
        else:
            column_of.append((structural, structural + 1))
            structural += 2

    needs_artificial = [offset < 0 for _, offset in rows]
    artificial_count = sum(needs_artificial)
    width = structural + len(rows) + artificial_count

    tableau = []
    basis = []
    next_artificial = structural + len(rows)
    for r, (normal, offset) in enumerate(rows):
        row = [Fraction(0)] * (width + 1)
        sign = -1 if needs_artificial[r] else 1
        for i, coefficient in enumerate(normal):
            if coefficient == 0:
                continue
            plus, minus = column_of[i]
            row[plus] = sign * coefficient
            if minus is not None:
                row[minus] = -sign * coefficient
        row[structural + r] = Fraction(sign)
        row[-1] = sign * offset
        if needs_artificial[r]:
            row[next_artificial] = Fraction(1)
            basis.append(next_artificial)
            next_artificial += 1
        else:
            basis.append(structural + r)
        tableau.append(row)

    allowed = [True] * width
    if artificial_count:
        phase_one_cost = [Fraction(0)] * width
        for j in range(structural + len(rows), width):
            phase_one_cost[j] = Fraction(-1)
        _simplex(tableau, basis, phase_one_cost, allowed)
        infeasibility = sum((row[-1] for row, b in zip(tableau, basis) if b >= structural + len(rows)), Fraction(0))
        if infeasibility > 0:
            logger.debug(f"LP infeasible (phase one residual {infeasibility})")
            return LpOutcome(INFEASIBLE)
        # Drive remaining (zero-level) artificials out of the basis.
        r = 0
        while r < len(tableau):
            if basis[r] >= structural + len(rows):
                column = next((j for j in range(structural + len(rows)) if tableau[r][j] != 0), None)
                if column is None:
                    del tableau[r]
                    del basis[r]
                    continue
                _pivot(tableau, basis, r, column)
            r += 1
        for j in range(structural + len(rows), width):
            allowed[j] = False

    cost = [Fraction(0)] * width
    for i, coefficient in enumerate(lp.objective):
        plus, minus = column_of[i]
        cost[plus] = coefficient
        if minus is not None:
            cost[minus] = -coefficient
    status = _simplex(tableau, basis, cost, allowed)
    if status == UNBOUNDED:
        return LpOutcome(UNBOUNDED)

    values = [Fraction(0)] * width
    for row, b in zip(tableau, basis):
        values[b] = row[-1]
    witness = []
    for i in range(dimension):
        plus, minus = column_of[i]
        witness.append(values[plus] - (values[minus] if minus is not None else 0))
    witness = tuple(witness)
    return LpOutcome(OPTIMAL, witness, dot(lp.objective, witness))


def is_extreme(p: Sequence, others: Sequence) -> bool:
    """
    True iff p is not a convex combination of the points in `others`.

    Decided by a feasibility LP on barycentric weights lambda >= 0,
    sum(lambda) = 1, sum(lambda_k q_k) = p.
    """
    p = _as_point(p)
    others = [_as_point(q) for q in others]
    if any(len(q) != len(p) for q in others):
        raise ValueError("is_extreme needs points of one dimension")
    if not others:
        return True
    if p in others:
        return False
    count = len(others)
    constraints = []
    for k in range(count):
        constraints.append((tuple(-1 if s == k else 0 for s in range(count)), 0))
    constraints.append(((1,) * count, 1))
    constraints.append(((-1,) * count, -1))
    for t in range(len(p)):
        coordinates = tuple(q[t] for q in others)
        constraints.append((coordinates, p[t]))
        constraints.append((tuple(-x for x in coordinates), -p[t]))
    outcome = solve(LinearProgram((0,) * count, tuple(constraints), count))
    return outcome.status == INFEASIBLE


def is_full_dimensional(h: HPolyhedron) -> bool:
    """
    True iff h has an interior point.

    Maximizes a slack t subject to normal . x + t * |normal|_1 <= offset and
    t <= 1, and answers t* > 0.
    """
    dimension = h.dimension
    constraints = []
    for normal, offset in h.constraints:
        norm = sum(abs(x) for x in normal)
        constraints.append((normal + (norm,), offset))
    constraints.append(((0,) * dimension + (1,), 1))
    objective = (0,) * dimension + (1,)
    outcome = solve(LinearProgram(objective, tuple(constraints), dimension + 1))
    return outcome.status == OPTIMAL and outcome.objective > 0


def vertex_enumeration(h: HPolyhedron) -> list:
    """
    All vertices of a bounded H-polyhedron, lexicographically sorted.

    Every n-subset of constraints with an invertible normal matrix is solved
    exactly; solutions satisfying all constraints are kept.

    Raises:
        ValueError: "unbounded polyhedron" if h is unbounded.
    """
    dimension = h.dimension
    for t in range(dimension):
        for sign in (1, -1):
            objective = tuple(sign if s == t else 0 for s in range(dimension))
            outcome = solve(LinearProgram(objective, h.constraints, dimension))
            if outcome.status == INFEASIBLE:
                return []
            if outcome.status == UNBOUNDED:
                raise ValueError("unbounded polyhedron")
    vertices = set()
    for subset in itertools.combinations(h.constraints, dimension):
        matrix = RationalMatrix([normal for normal, _ in subset])
        solution = gaussian_solve(matrix, [offset for _, offset in subset])
        if solution is None:
            continue
        point = tuple(solution)
        if h.contains(point):
            vertices.add(point)
    logger.debug(f"Vertex enumeration over {len(h.constraints)} constraints found {len(vertices)} vertices")
    return sorted(vertices)
