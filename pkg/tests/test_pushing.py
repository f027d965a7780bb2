import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dehn.complex2 import disc_grid, single_triangle
from dehn.pushing import (
    Arc, LocalSegment, PLChain, Segment, alpha_point_segment, chain_from_points, choose_center, estimate_alpha,
    projected_lengths, push_chain, pushing_constants, quadrature_K, radial_project, random_loop, _O,
)


def test_constants_in_the_plane():
    for r in (0.05, 0.09, 0.12):
        c = pushing_constants(1, 2, r)
        assert math.isclose(c.K, 13 * math.pi * r * r, rel_tol=1e-12)
        assert c.v0 == 14 and c.ratio == 13
        assert abs(quadrature_K(1, 2, r) - c.K) <= 1e-6 * c.K


def test_constants_in_space():
    c = pushing_constants(2, 3, 0.05)
    assert math.isclose(c.K, 148 / 3 * math.pi * 0.05**3, rel_tol=1e-12)
    assert c.v0 == 38
    assert abs(quadrature_K(2, 3, 0.05) - c.K) <= 1e-6 * c.K
    assert c.C is None


def test_constants_reject_bad_input():
    with pytest.raises(ValueError):
        pushing_constants(1, 2, 0.2)
    with pytest.raises(ValueError):
        pushing_constants(2, 2)
    with pytest.raises(ValueError):
        pushing_constants(1, 3, 0.12)


def test_projection_leaves_far_segments_alone():
    seg = LocalSegment((0.1, 0.05), (1.3, 0.05))
    assert radial_project([seg], _O + [0, 0.05], 0.24) == [seg]


@pytest.mark.parametrize("d", [0.0, 0.05, 0.2])
def test_chord_becomes_arc(d):
    u = _O
    seg = LocalSegment((u[0] - 1, u[1] + d), (u[0] + 1, u[1] + d))
    arcs = [p for p in radial_project([seg], u, 0.24) if isinstance(p, Arc)]
    assert len(arcs) == 1
    assert math.isclose(arcs[0].length, 2 * 0.24 * (math.pi / 2 - math.asin(d / 0.24)), rel_tol=1e-12)


def test_small_segment_stretch():
    eps, rho = 1e-5, 0.1
    u = _O
    seg = LocalSegment((u[0] + rho, u[1] - eps / 2), (u[0] + rho, u[1] + eps / 2))
    (arc,) = radial_project([seg], u, 0.24)
    assert abs(arc.length / (eps * 0.24 / rho) - 1) < 0.01


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=4, max_size=4), st.floats(0, 0.1), st.floats(0, 2 * math.pi))
def test_vectorised_length_matches_pieces(xs, rho, th):
    a, b = (_O[0] + xs[0], _O[1] + xs[1]), (_O[0] + xs[2], _O[1] + xs[3])
    if math.dist(a, b) < 1e-6:
        return
    u = _O + rho * np.array([math.cos(th), math.sin(th)])
    seg = LocalSegment(a, b)
    try:
        pieces = radial_project([seg], u, 0.24)
    except ValueError:
        return  # centre on the segment
    L, _ = projected_lengths(np.array([[a, b]]), u[None, :], 0.24)
    assert math.isclose(L[0], sum(p.length for p in pieces), rel_tol=1e-9, abs_tol=1e-12)


def test_center_selection():
    c = pushing_constants()
    u, rej = choose_center([], c, 1)
    assert np.allclose(u, _O) and rej == 0
    seg = [LocalSegment(tuple(_O - [0.36, 0]), tuple(_O + [0.36, 0]))]
    for seed in range(20):
        u, _ = choose_center(seg, c, seed)
        L, _ = projected_lengths(np.array([[s.a, s.b] for s in seg]), u[None, :], 0.24)
        assert L[0] <= c.v0 * 0.72 and np.linalg.norm(u - _O) <= c.r


@pytest.mark.parametrize("v", [4, 8, 16])
def test_alpha_matches_closed_form_for_a_tiny_segment(v):
    r, eps = 0.12, 1e-6
    seg = [LocalSegment(tuple(_O - [eps / 2, 0]), tuple(_O + [eps / 2, 0]))]
    est = estimate_alpha(seg, v, 200_000, 11, r)
    assert est.ci_low <= alpha_point_segment(v, r) <= est.ci_high


def test_alpha_bound_for_random_chords():
    c = pushing_constants()
    rng = np.random.default_rng(5)
    for _ in range(5):
        p, q = _O + rng.uniform(-0.3, 0.3, 2), _O + rng.uniform(-0.3, 0.3, 2)
        for v in (c.v0, 2 * c.v0, 4 * c.v0):
            est = estimate_alpha([LocalSegment(tuple(p), tuple(q))], v, 5000, 1)
            assert est.ci_low * v <= c.K


def test_alpha_of_empty_chain_is_zero():
    assert estimate_alpha([], 3, 100, 0).alpha == 0


def test_chain_in_skeleton_is_unchanged():
    K = disc_grid(2)
    T = chain_from_points([("v", 0), ("v", 1), ("v", 4)])
    res = push_chain(T, K, seed=3)
    assert res.R.pieces == T.pieces and res.S == [] and res.certificate.ok


def test_single_crossing_segment():
    K = single_triangle()
    T = chain_from_points([("v", 0), ("f", 0, 0.2, 0.3, 0.5), ("v", 1)], closed=False)
    res = push_chain(T, K, seed=7)
    cert = res.certificate
    assert cert.ok
    assert res.R.boundary() == T.boundary()
    assert all(p.p[0] != "f" and p.q[0] != "f" for p in res.R.pieces)
    assert cert.vol_R <= cert.constants["C"] * cert.vol_T


def test_push_rejects_interior_boundary():
    K = single_triangle()
    T = chain_from_points([("v", 0), ("f", 0, 0.2, 0.3, 0.5)], closed=False)
    with pytest.raises(ValueError):
        push_chain(T, K)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_push_certificates_on_random_loops(seed):
    K = disc_grid(3)
    T = random_loop(K, seed)
    res = push_chain(T, K, seed=seed)
    assert res.certificate.ok
    assert PLChain.from_json(res.R.to_json(), K).pieces == res.R.pieces


def test_push_is_deterministic():
    K = disc_grid(3)
    T = random_loop(K, 9)
    a, b = push_chain(T, K, seed=2), push_chain(T, K, seed=2)
    assert a.certificate.to_dict() == b.certificate.to_dict()


def test_v0_is_shared_across_simplices():
    c = pushing_constants()
    res = push_chain(random_loop(disc_grid(3), 4, steps=12), disc_grid(3), c, seed=1)
    assert len(res.certificate.records) > 1
    assert res.certificate.constants == c.to_dict() == pushing_constants().to_dict()
    assert all(rec.stretch_ok for rec in res.certificate.records)


def test_segment_chain_boundary():
    T = PLChain([Segment(("v", 0), ("v", 1)), Segment(("v", 1), ("v", 2), 2)])
    assert T.boundary() == {("v", 0): -1, ("v", 1): -1, ("v", 2): 2}
