from fractions import Fraction

import numpy as np
import pytest

from utils import fan, polytope
from utils.guards import DeskGuardError
from utils.lp import HPolyhedron


def test_fan_in_dimension_one():
    cones = fan.fan_delta(1)
    assert len(cones) == 2
    assert cones[0].h_rep.constraints == (((-1,), 0),)
    assert cones[1].h_rep.constraints == (((1,), 0),)


def test_positive_quadrant():
    sigma_0 = fan.fan_delta(2)[0]
    assert set(sigma_0.h_rep.constraints) == {((-1, 0), 0), ((0, -1), 0)}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_generators_lie_on_exactly_n_minus_one_facets(n):
    for cone in fan.fan_delta(n):
        for generator in cone.generators:
            assert cone.contains(generator)
            tight = [normal for normal, _ in cone.h_rep.constraints
                     if sum(a * x for a, x in zip(normal, generator)) == 0]
            assert len(tight) == n - 1


def test_dependent_generators_are_rejected():
    with pytest.raises(ValueError):
        fan.SimplicialCone(2, ((1, 1), (2, 2)))


def test_negated_cone():
    cone = fan.fan_delta(2)[0].negated()
    assert cone.contains((-1, -2))
    assert not cone.contains((1, 0))


def test_common_refinement_in_the_plane_is_the_hexagonal_fan():
    cells = fan.common_refinement(2)
    assert len(cells) == 6
    assert [cell.pair for cell in cells] == [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_cell_count(n):
    cells = fan.common_refinement(n)
    assert len(cells) == n * (n + 1)
    assert all(cell.pair[0] != cell.pair[1] for cell in cells)


def test_refinement_cells_are_symmetric_under_negation():
    pairs = {cell.pair for cell in fan.common_refinement(3)}
    assert {(j, i) for i, j in pairs} == pairs


def test_cell_count_matches_grid_sample_in_dimension_three():
    pairs = {cell.pair for cell in fan.common_refinement(3)}
    assert fan.sample_pair_labels(3, radius=10) == pairs


def test_sample_pair_labels_drops_boundary_points():
    labels = fan.sample_pair_labels(2, radius=2)
    assert labels == {(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)}
    assert fan._interior_labels(np.array([[0, 0], [1, 1], [-1, -1]])).tolist() == [-1, 0, -1]


def test_covering_check():
    assert fan.covering_check(2) == (4, 4)
    assert fan.covering_check(3) == (8, 8)


def test_cells_refine_their_parent_cones():
    cones = fan.fan_delta(2)
    for cell in fan.common_refinement(2):
        i, j = cell.pair
        vertices = fan.cell_vertices(cell)
        assert vertices
        for vertex in vertices:
            assert cones[i].contains(vertex)
            assert cones[j].negated().contains(vertex)


def test_clipped_cell_volumes_are_positive():
    for cell in fan.common_refinement(2):
        body = polytope.VPolytope.from_points(2, fan.cell_vertices(cell))
        assert polytope.volume(body) > 0


@pytest.mark.parametrize("n", [2, 3])
def test_interior_disjoint(n):
    assert fan.interior_disjoint(n)


def test_guards():
    with pytest.raises(DeskGuardError):
        fan.common_refinement(5)
    with pytest.raises(DeskGuardError):
        fan.covering_check(4)
    with pytest.raises(ValueError):
        fan.common_refinement(1)


def test_raised_guard_allows_larger_dimensions(monkeypatch):
    monkeypatch.setenv("CREMONA_DESK_GUARD", "2")
    assert len(fan.common_refinement(5)) == 30


def test_cell_to_json():
    cell = fan.RefinementCell((0, 1), HPolyhedron(2, (((Fraction(-1), Fraction(0)), Fraction(0)),)))
    assert fan.cell_to_json(cell) == {"pair": [0, 1], "inequalities": [{"normal": [-1, 0], "offset": 0}]}
