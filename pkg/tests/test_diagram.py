import pytest
from hypothesis import given, settings, strategies as st

from dehn.complex2 import annulus, disc_grid, presentation_complex, single_triangle, torus
from dehn.diagram import (
    CollapseError, DiagramError, VanKampenDiagram, collapse, collapse_boundary_loop, complex_area,
    degenerate_length, diagram_from_triangles, enumerate_area_oracle, grid_diagram, random_degenerate_diagram,
)
from dehn.presentation import AreaLimits, combinatorial_area, cyclic_group, free_reduce, z2


def two_triangles():
    # one triangle onto the simplex, its neighbour folded onto the edge 0-2
    return diagram_from_triangles(single_triangle(), [(0, 1, 2), (0, 2, 3)], [0, 1, 2, 3], [0, 1, 2, 2])


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("target", ["disc", "torus"])
def test_grid_diagrams_are_combinatorial(n, target):
    D = grid_diagram(n, target)
    D.validate()
    assert not D.degenerate
    assert D.area == 2 * n * n
    assert len(D.boundary_word) == 4 * n


def test_collapse_of_combinatorial_diagram_is_identity():
    D = grid_diagram(2, "torus")
    rep = collapse(D)
    assert rep.excised_sphere_count == 0
    assert rep.diagram.to_json() == D.to_json()


def test_folded_triangle_needs_boundary_collapse():
    D = two_triangles()
    assert D.degenerate and D.area == 1
    with pytest.raises(CollapseError):
        collapse(D)
    rep = collapse(D, allow_boundary_collapse=True)
    assert rep.diagram.area == 1 and rep.excised_sphere_count == 0
    assert rep.diagram.boundary_word == D.boundary_word


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["torus", "disc"]), st.integers(1, 3))
def test_collapse_soundness(seed, target, n):
    D = random_degenerate_diagram(seed, n=n, target=target)
    rep = collapse(D)
    rep.diagram.check_combinatorial()
    assert rep.diagram.boundary_word == D.boundary_word
    assert rep.area_after <= rep.area_before == D.area
    assert all(x == 2 for x in rep.sphere_eulers)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_degenerate_area_dominates_filling_area(seed):
    D = random_degenerate_diagram(seed, n=2, target="torus")
    word = tuple((e + 1) * s for e, s in D.boundary_word)
    assert enumerate_area_oracle(word, torus(3), max_cells=8) <= D.area


def test_json_round_trip_is_canonical():
    D = random_degenerate_diagram(3)
    text = D.to_json()
    E = VanKampenDiagram.from_json(text, D.target)
    assert E.to_json() == text
    with pytest.raises(DiagramError):
        VanKampenDiagram.from_json('{"vertices": 1}', D.target)


def test_non_disc_domains_are_rejected():
    A = annulus(1)
    tris = [A.face_vertices(f) for f in range(len(A.faces))]
    with pytest.raises(DiagramError):
        # outer ring only: the inner hole makes the capped surface a non-sphere
        D = diagram_from_triangles(A, tris, [A.edges[0][0], A.edges[0][1]], list(range(A.n_vertices)))
        D.check_planar()


def test_boundary_loop_helpers():
    assert degenerate_length([0, 1, 1, 2]) == 3
    assert collapse_boundary_loop([0, 1, 1, 2, 0]) == (0, 1, 2)
    assert collapse_boundary_loop([4, 4]) == ()


@pytest.mark.parametrize("word, area", [("abAB", 1), ("aabbAABB", 4), ("abABabAB", 2), ("aaabbbAAABBB", 9)])
def test_oracle_agrees_with_word_search_on_z2(word, area):
    P = z2()
    w = free_reduce(P.parse_word(word))
    assert enumerate_area_oracle(w, presentation_complex(P), max_cells=9) == area
    assert combinatorial_area(w, P).area == area


def test_oracle_on_cyclic_group_and_limits():
    K = presentation_complex(cyclic_group(3))
    assert [enumerate_area_oracle((1,) * (3 * k), K, 4) for k in (1, 2, 3)] == [1, 2, 3]
    assert enumerate_area_oracle((1,) * 9, K, 2) is None
    assert enumerate_area_oracle((1, 1), K, 5) is None


def test_complex_area_matches_oracle_on_small_loops():
    K = torus(3)
    D = grid_diagram(1, "torus")
    word = tuple((e + 1) * s for e, s in D.boundary_word)
    assert complex_area(word, K, AreaLimits(max_area=4)).area == enumerate_area_oracle(word, K) == 2
