"""
The fan Delta of P^n, its negative, and the full-dimensional cones of their
common refinement.

Cones are closed and described by homogeneous inequalities normal . x <= 0.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from utils import polytope
from utils.exact_core import RationalMatrix, gaussian_solve
from utils.guards import DeskGuard
from utils.lp import HPolyhedron, is_full_dimensional, vertex_enumeration

logger = logging.getLogger(__name__)


def _primitive(vector: list) -> tuple:
    """Smallest integer multiple of a rational vector with the same direction."""
    denominator = 1
    for x in vector:
        denominator = denominator * x.denominator // math.gcd(denominator, x.denominator)
    integers = [int(x * denominator) for x in vector]
    divisor = 0
    for x in integers:
        divisor = math.gcd(divisor, x)
    return tuple(x // divisor for x in integers)


@dataclass(frozen=True)
class SimplicialCone:
    """Cone spanned by n linearly independent lattice vectors in R^n."""

    dimension: int
    generators: tuple
    h_rep: HPolyhedron = field(init=False, compare=False)

    def __post_init__(self):
        generators = tuple(tuple(int(x) for x in g) for g in self.generators)
        if len(generators) != self.dimension or any(len(g) != self.dimension for g in generators):
            raise ValueError(f"A simplicial cone in R^{self.dimension} needs {self.dimension} generators of that length")
        object.__setattr__(self, "generators", generators)
        constraints = []
        for index, omitted in enumerate(generators):
            rows = [g for k, g in enumerate(generators) if k != index] + [omitted]
            rhs = [0] * (self.dimension - 1) + [-1]
            normal = gaussian_solve(RationalMatrix(rows), rhs)
            if normal is None:
                raise ValueError(f"Cone generators are linearly dependent: {generators}")
            constraints.append((_primitive(normal), 0))
        object.__setattr__(self, "h_rep", HPolyhedron(self.dimension, tuple(constraints)))

    def contains(self, point) -> bool:
        return self.h_rep.contains(point)

    def negated(self) -> "SimplicialCone":
        return SimplicialCone(self.dimension, tuple(tuple(-x for x in g) for g in self.generators))


@dataclass(frozen=True)
class RefinementCell:
    """sigma_i intersected with -sigma_j; only full-dimensional intersections are kept."""

    pair: tuple
    cell: HPolyhedron


def fan_generators(n: int) -> list:
    """e_0 = -(e_1 + ... + e_n), then the standard basis e_1..e_n."""
    if n < 1:
        raise ValueError(f"fan_generators needs n >= 1 (got {n})")
    basis = [tuple(1 if t == i else 0 for t in range(n)) for i in range(n)]
    return [tuple(-1 for _ in range(n))] + basis


def fan_delta(n: int) -> list:
    """The n+1 maximal cones sigma_i = cone(e_j : j != i); sigma_0 is the positive orthant."""
    generators = fan_generators(n)
    return [SimplicialCone(n, tuple(g for j, g in enumerate(generators) if j != i)) for i in range(n + 1)]


def common_refinement(n: int) -> list:
    """
    The full-dimensional cones sigma_i and -sigma_j, in lexicographic (i, j) order.

    Raises:
        DeskGuardError: If n exceeds the refinement_n guard.
    """
    if n < 2:
        raise ValueError(f"common_refinement needs n >= 2 (got {n})")
    DeskGuard().check("refinement_n", n, "common refinement out of desk range")
    cones = fan_delta(n)
    cells = []
    for i, j in itertools.product(range(n + 1), repeat=2):
        cell = cones[i].h_rep.intersect(cones[j].h_rep.negated())
        if is_full_dimensional(cell):
            cells.append(RefinementCell((i, j), cell))
    logger.debug(f"Common refinement for n={n}: {len(cells)} of {(n + 1) ** 2} pairs are full-dimensional")
    return cells


def cell_vertices(cell: RefinementCell, box=1) -> list:
    """Vertices of the cell clipped to [-box, box]^n."""
    return vertex_enumeration(cell.cell.with_box(box))


def covering_check(n: int) -> tuple:
    """
    Sum of the clipped cell volumes against the volume 2^n of the box [-1, 1]^n.

    The two agree exactly when the cells cover R^n with disjoint interiors.
    """
    if n < 2:
        raise ValueError(f"covering_check needs n >= 2 (got {n})")
    DeskGuard().check("covering_n", n, "covering check out of desk range")
    total = Fraction(0)
    for cell in common_refinement(n):
        cell_volume = polytope.volume(polytope.VPolytope.from_points(n, cell_vertices(cell)))
        logger.debug(f"Cell {cell.pair} clipped volume {cell_volume}")
        total += cell_volume
    return total, Fraction(2 ** n)


def interior_disjoint(n: int) -> bool:
    """True iff no two distinct cells share an interior point."""
    if n < 2:
        raise ValueError(f"interior_disjoint needs n >= 2 (got {n})")
    DeskGuard().check("covering_n", n, "interior disjointness check out of desk range")
    cells = common_refinement(n)
    for first, second in itertools.combinations(cells, 2):
        if is_full_dimensional(first.cell.intersect(second.cell)):
            logger.warning(f"Cells {first.pair} and {second.pair} overlap")
            return False
    return True


def _interior_labels(points: np.ndarray) -> np.ndarray:
    # x is interior to sigma_0 iff x > 0; to sigma_i (i >= 1) iff x_i is the unique minimum and negative.
    labels = np.full(points.shape[0], -1, dtype=np.int64)
    labels[(points > 0).all(axis=1)] = 0
    ordered = np.sort(points, axis=1)
    if points.shape[1] > 1:
        unique_minimum = ordered[:, 0] < ordered[:, 1]
    else:
        unique_minimum = np.ones(points.shape[0], dtype=bool)
    mask = unique_minimum & (ordered[:, 0] < 0)
    labels[mask] = np.argmin(points[mask], axis=1) + 1
    return labels


def sample_pair_labels(n: int, radius: int = 6) -> set:
    """
    Classifies the integer grid [-radius, radius]^n by (i, j) with x interior to
    sigma_i and -x interior to sigma_j; boundary points are dropped.
    """
    if n < 1 or radius < 1:
        raise ValueError(f"sample_pair_labels needs n >= 1 and radius >= 1 (got n={n}, radius={radius})")
    axis = np.arange(-radius, radius + 1, dtype=np.int64)
    grid = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
    first = _interior_labels(grid)
    second = _interior_labels(-grid)
    keep = (first >= 0) & (second >= 0)
    labels = {(int(i), int(j)) for i, j in zip(first[keep], second[keep])}
    logger.debug(f"Sampled {grid.shape[0]} grid points, {int(keep.sum())} interior, {len(labels)} labels")
    return labels


def cell_to_json(cell: RefinementCell) -> dict:
    return {
        "pair": list(cell.pair),
        "inequalities": [{"normal": [int(x) for x in normal], "offset": int(offset)}
                         for normal, offset in cell.cell.constraints],
    }
