import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dehn.complex2 import (
    BARYCENTER, CIRCUMRADIUS, INRADIUS, SIDE, TRIANGLE_AREA, Complex2, ComplexError, annulus,
    barycentric_subdivision, disc_grid, from_plane, presentation_complex, single_triangle, standard_model,
    to_plane, torus, triangulate, validate,
)
from dehn.presentation import cyclic_group, z2


def test_standard_simplex_metric():
    V = to_plane(np.eye(3))
    sides = [np.linalg.norm(V[i] - V[(i + 1) % 3]) for i in range(3)]
    assert np.allclose(sides, SIDE)
    assert math.isclose(TRIANGLE_AREA, math.sqrt(3) / 2)
    O = to_plane(BARYCENTER)
    assert math.isclose(np.linalg.norm(V[0] - O), CIRCUMRADIUS)
    assert math.isclose(INRADIUS, 1 / math.sqrt(6))
    # counterclockwise
    (ax, ay), (bx, by), (cx, cy) = V
    assert (bx - ax) * (cy - ay) - (by - ay) * (cx - ax) > 0


@given(st.lists(st.floats(0.01, 1), min_size=3, max_size=3))
def test_plane_coordinates_round_trip(w):
    b = np.array(w) / sum(w)
    assert np.allclose(from_plane(to_plane(b)), b)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_disc_grid_is_a_simplicial_disc(n):
    K = disc_grid(n)
    assert K.simplicial and K.euler_characteristic() == 1
    assert len(K.faces) == 2 * n * n


def test_models():
    assert single_triangle().euler_characteristic() == 1
    assert annulus(2).euler_characteristic() == 0 and annulus(2).simplicial
    T = torus(3)
    assert T.euler_characteristic() == 0 and T.simplicial
    assert standard_model("disc_grid", 2).to_text() == disc_grid(2).to_text()
    with pytest.raises(ValueError):
        standard_model("klein")


def test_text_round_trip_and_errors():
    K = disc_grid(2)
    assert Complex2.from_text(K.to_text()).to_text() == K.to_text()
    with pytest.raises(ComplexError):
        Complex2.from_text("V 2\nE 0 5\n")
    with pytest.raises(ComplexError):
        Complex2.from_text("V 3\nE 0 1\nE 1 2\nF 0+ 1+\n")  # open face


@pytest.mark.parametrize("P", [z2(), cyclic_group(3)])
def test_presentation_complex_triangulates(P):
    C = presentation_complex(P)
    assert C.n_vertices == 1 and len(C.faces) == len(P.relators)
    T = triangulate(C)
    validate(T, require_simplicial=True)
    assert T.euler_characteristic() == C.euler_characteristic()
    assert len(T.provenance) == len(T.faces)


def test_subdivision_preserves_euler_characteristic():
    for K in (disc_grid(2), torus(3), annulus(1)):
        B = barycentric_subdivision(K)
        assert B.euler_characteristic() == K.euler_characteristic()
        assert len(B.faces) == 6 * len(K.faces)
