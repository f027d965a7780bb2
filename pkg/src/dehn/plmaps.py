"""Loops in the 1-skeleton made combinatorial, and degrees of PL disc maps.

A loop in the 1-skeleton is cut at a generic interior point ``p_e`` of every
edge.  Between two consecutive passages through such points the loop stays in
the open star of one vertex, so it can be straightened to ``[p_e, v] + [v, p_e']``
without increasing length; reading off the crossed edges gives a combinatorial
loop, and free cancellation removes arcs that return to their starting point.

For disc maps the signed count of preimages of a generic point of a 2-simplex
gives the degree ``d_X`` of each preimage component ``X``.  Since every
piece is affine, ``area(f|X) >= (sqrt 3 / 2) |d_X|`` can be checked directly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from typing import Optional, Sequence

import numpy as np

from .complex2 import SIDE, TRIANGLE_AREA, Complex2, disc_grid, single_triangle, to_plane, torus
from .diagram import VanKampenDiagram, diagram_from_triangles
from .pushing import PLChain, Segment, carrier, local_xy, normalize_point

TOL = 1e-9


class LoopError(ValueError):
    pass


# -- loops ------------------------------------------------------------------------------

@dataclass(frozen=True)
class CombinatorialLoop:
    """Closed edge path as ``(edge, sign)`` pairs."""

    edges: tuple

    def __len__(self) -> int:
        return len(self.edges)

    def vertices(self, K: Complex2) -> list:
        return [K.endpoints(e, s)[0] for e, s in self.edges]

    def validate(self, K: Complex2) -> None:
        n = len(self.edges)
        for k, (e, s) in enumerate(self.edges):
            if not 0 <= e < len(K.edges) or s not in (1, -1):
                raise LoopError(f"bad edge step {(e, s)}")
            head = K.endpoints(e, s)[1]
            tail = K.endpoints(*self.edges[(k + 1) % n])[0]
            if head != tail:
                raise LoopError(f"steps {k} and {(k + 1) % n} do not meet")

    def to_json(self) -> str:
        return json.dumps({"edges": [list(x) for x in self.edges]}, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "CombinatorialLoop":
        return cls(tuple((int(e), int(s)) for e, s in json.loads(text)["edges"]))


def _edge_param(K: Complex2, e: int, key) -> float:
    if key[0] == "v":
        t, h = K.edges[e]
        if key[1] == t:
            return 0.0
        if key[1] == h:
            return 1.0
    elif key[0] == "e" and key[1] == e:
        return key[2]
    raise LoopError(f"point {key} is not on edge {e}")


def skeleton_segments(K: Complex2, eta: PLChain) -> list:
    """``(edge, t0, t1)`` per nondegenerate piece, checking the loop is closed and in the 1-skeleton."""
    pieces = [s for s in eta.pieces if s.p != s.q]
    if not pieces:
        return []
    for k, s in enumerate(pieces):
        if s.mult != 1:
            raise LoopError("loops have unit multiplicities")
        if s.q != pieces[(k + 1) % len(pieces)].p:
            raise LoopError("loop is not closed")
    out = []
    for s in pieces:
        vs = carrier(K, s.p) | carrier(K, s.q)
        if s.p[0] == "f" or s.q[0] == "f" or len(vs) != 2:
            raise LoopError(f"piece {s} leaves the 1-skeleton")
        a, b = sorted(vs)
        try:
            e = K.edge_index()[(a, b)][0]
        except KeyError:
            raise LoopError(f"piece {s} leaves the 1-skeleton") from None
        if (s.p[0] == "e" and s.p[1] != e) or (s.q[0] == "e" and s.q[1] != e):
            raise LoopError(f"piece {s} leaves the 1-skeleton")
        out.append((e, _edge_param(K, e, s.p), _edge_param(K, e, s.q)))
    return out


def generic_edge_points(K: Complex2, eta: PLChain, seed) -> dict:
    """Parameter ``t_e`` in the middle third of every edge, off the loop's breakpoints."""
    segs = skeleton_segments(K, eta)
    excluded: dict = {}
    for e, t0, t1 in segs:
        excluded.setdefault(e, set()).update((t0, t1))
    out = {}
    for e in range(len(K.edges)):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), e]))
        bad = excluded.get(e, set())
        while True:
            t = float(rng.uniform(1 / 3, 2 / 3))
            if all(abs(t - x) > TOL for x in bad):
                out[e] = t
                break
    return out


def preimage_count(K: Complex2, eta: PLChain, e: int, t: float) -> int:
    return sum(1 for f, t0, t1 in skeleton_segments(K, eta) if f == e and min(t0, t1) < t < max(t0, t1))


def ell_min(points: dict) -> float:
    """Smallest distance from a chosen edge point to an endpoint of its edge."""
    return SIDE * min(min(t, 1 - t) for t in points.values())


@dataclass
class StraightenCertificate:
    length_eta: float
    length_straightened: float
    crossings: int
    cancelled: int
    combinatorial_length: int
    ell_min: float
    length_ok: bool
    count_ok: bool

    @property
    def ok(self) -> bool:
        return self.length_ok and self.count_ok

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d

    def table(self) -> str:
        rows = [("length of eta", f"{self.length_eta:.9f}"),
                ("straightened length", f"{self.length_straightened:.9f}"),
                ("crossings", str(self.crossings)), ("cancelled", str(self.cancelled)),
                ("combinatorial length", str(self.combinatorial_length)),
                ("ell_min", f"{self.ell_min:.9f}"),
                ("certificate", "valid" if self.ok else "INVALID")]
        return "\n".join(f"{a:<22} {b}" for a, b in rows)


def combinatorialize(eta: PLChain, K: Complex2, seed=0, points: Optional[dict] = None) -> tuple:
    """Combinatorial loop freely homotopic to ``eta`` and its length certificate.

    Each passage through ``p_e`` in direction ``s`` contributes the step
    ``(e, s)``; consecutive opposite steps bound arcs that return to the same
    point and are cancelled (cyclically).  The straightened loop is the
    resulting edge path, of length ``SIDE * |zeta|``.
    """
    segs = skeleton_segments(K, eta)
    points = points if points is not None else generic_edge_points(K, eta, seed)
    steps = []
    for e, t0, t1 in segs:
        p = points[e]
        if min(t0, t1) < p < max(t0, t1):
            steps.append((e, 1 if t1 > t0 else -1))
    stack: list = []
    for st in steps:
        if stack and stack[-1] == (st[0], -st[1]):
            stack.pop()
        else:
            stack.append(st)
    i, j = 0, len(stack) - 1
    while i < j and stack[i] == (stack[j][0], -stack[j][1]):
        i, j = i + 1, j - 1
    zeta = CombinatorialLoop(tuple(stack[i:j + 1]))
    zeta.validate(K)
    length = sum(SIDE * abs(t1 - t0) for _, t0, t1 in segs)
    lmin = ell_min(points)
    straight = SIDE * len(zeta)
    cert = StraightenCertificate(length, straight, len(steps), len(steps) - len(zeta), len(zeta), lmin,
                                 straight <= length + TOL, len(zeta) <= length / lmin + TOL)
    return zeta, cert


def combinatorial_to_chain(zeta: CombinatorialLoop, K: Complex2) -> PLChain:
    return PLChain([Segment(("v", K.endpoints(e, s)[0]), ("v", K.endpoints(e, s)[1])) for e, s in zeta.edges])


# -- disc maps ---------------------------------------------------------------------------

class DiscMapError(ValueError):
    pass


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


@dataclass
class PLDiscMap:
    """Affine-on-triangles map from a triangulated planar disc into a complex.

    ``triangles`` are counterclockwise vertex triples of the domain,
    ``images`` are point keys in the target, ``faces[t]`` is a target
    2-simplex whose closure contains the image of triangle ``t`` and
    ``boundary`` is the counterclockwise ring of boundary vertices.
    """

    target: Complex2
    positions: np.ndarray
    triangles: list
    images: list
    faces: list
    boundary: list

    def __post_init__(self):
        self.positions = np.asarray(self.positions, float).reshape(-1, 2)
        self.triangles = [tuple(int(x) for x in t) for t in self.triangles]
        self.images = [normalize_point(self.target, tuple(k)) for k in self.images]
        self.faces = [int(f) for f in self.faces]
        self.boundary = [int(v) for v in self.boundary]

    def image_xy(self, t: int) -> np.ndarray:
        f = self.faces[t]
        return np.array([local_xy(self.target, f, self.images[v]) for v in self.triangles[t]])

    def jacobian(self, t: int) -> float:
        """Ratio of oriented image area to domain area."""
        a, b, c = self.positions[list(self.triangles[t])]
        A, B, C = self.image_xy(t)
        return _orient(A, B, C) / _orient(a, b, c)

    def domain_area(self, t: int) -> float:
        a, b, c = self.positions[list(self.triangles[t])]
        return 0.5 * _orient(a, b, c)

    def image_area(self, t: int) -> float:
        return float(0.5 * abs(_orient(*self.image_xy(t))))

    def validate(self) -> None:
        K = self.target
        n = len(self.positions)
        if len(self.images) != n:
            raise DiscMapError("one image per domain vertex is required")
        if len(self.faces) != len(self.triangles):
            raise DiscMapError("one target face per domain triangle is required")
        count: dict = {}
        for t, tri in enumerate(self.triangles):
            if len(set(tri)) != 3 or not all(0 <= v < n for v in tri):
                raise DiscMapError(f"bad triangle {tri}")
            if self.domain_area(t) <= 0:
                raise DiscMapError(f"triangle {t} is not counterclockwise")
            fv = set(K.face_vertices(self.faces[t]))
            for v in tri:
                key = self.images[v]
                if not carrier(K, key) <= fv or (key[0] == "f" and key[1] != self.faces[t]):
                    raise DiscMapError(f"vertex {v} of triangle {t} maps outside target face {self.faces[t]}")
            for k in range(3):
                u, w = tri[k], tri[(k + 1) % 3]
                count[(u, w)] = count.get((u, w), 0) + 1
        ring = self.boundary
        ring_edges = {(ring[k], ring[(k + 1) % len(ring)]) for k in range(len(ring))}
        for (u, w), c in count.items():
            if c > 1:
                raise DiscMapError("domain is not an oriented surface")
            if (w, u) not in count and (u, w) not in ring_edges:
                raise DiscMapError(f"free edge {(u, w)} missing from the boundary ring")
        if any(d not in count for d in ring_edges) or len(ring_edges) != len(ring):
            raise DiscMapError("boundary ring does not follow free edges")
        n_edges = len({frozenset(d) for d in count})
        if n - n_edges + len(self.triangles) != 1:
            raise DiscMapError("domain is not a disc")
        idx = K.edge_index()
        for k, v in enumerate(ring):
            a, b = self.images[v], self.images[ring[(k + 1) % len(ring)]]
            if a[0] != "v" or b[0] != "v" or (a[1], b[1]) not in idx:
                raise DiscMapError("boundary does not map combinatorially")

    def boundary_loop(self) -> CombinatorialLoop:
        idx = self.target.edge_index()
        ring = self.boundary
        return CombinatorialLoop(tuple(idx[(self.images[ring[k]][1], self.images[ring[(k + 1) % len(ring)]][1])]
                                       for k in range(len(ring))))

    @property
    def aligned(self) -> bool:
        return all(k[0] == "v" for k in self.images)

    def to_json(self) -> str:
        doc = {"target": self.target.to_text(),
               "positions": [[float(x), float(y)] for x, y in self.positions],
               "triangles": [list(t) for t in self.triangles],
               "images": [list(k) for k in self.images],
               "faces": self.faces, "boundary": self.boundary}
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "PLDiscMap":
        doc = json.loads(text)
        K = Complex2.from_text(doc["target"])
        return cls(K, doc["positions"], doc["triangles"], doc["images"], doc["faces"], doc["boundary"])


@dataclass
class ComponentDegree:
    simplex: int
    triangles: list
    degree: int
    area: float
    bound_ok: bool
    sample_degrees: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return len(set(self.sample_degrees)) <= 1


@dataclass
class DegreeReport:
    components: list
    total_abs_degree: int
    total_area: float

    @property
    def ok(self) -> bool:
        return all(c.bound_ok and c.consistent for c in self.components)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d

    def table(self) -> str:
        lines = [f"{'simplex':>7} {'triangles':>9} {'degree':>6} {'area':>12} {'bound':>6}"]
        for c in self.components:
            lines.append(f"{c.simplex:>7} {len(c.triangles):>9} {c.degree:>6} {c.area:>12.9f} "
                         f"{'ok' if c.bound_ok else 'FAIL':>6}")
        lines.append(f"sum |d_X| = {self.total_abs_degree}  total area = {self.total_area:.9f}")
        return "\n".join(lines)


def preimage_components(f: PLDiscMap) -> list:
    """``(sigma, triangles)`` for each component of the preimage of each closed 2-simplex.

    Triangles whose image lies in the closed simplex are joined when they share
    a domain vertex.  The frontier of such a union maps into the boundary of
    the simplex, so its degree is well defined.
    """
    K = f.target
    out = []
    for s in range(len(K.faces)):
        fv = set(K.face_vertices(s))
        members = []
        for t, tri in enumerate(f.triangles):
            keys = [f.images[v] for v in tri]
            if f.faces[t] == s or all(carrier(K, k) <= fv and k[0] != "f" for k in keys):
                members.append(t)
        if not members:
            continue
        parent = {t: t for t in members}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        by_vertex: dict = {}
        for t in members:
            for v in f.triangles[t]:
                by_vertex.setdefault(v, []).append(t)
        for ts in by_vertex.values():
            for t in ts[1:]:
                parent[find(t)] = find(ts[0])
        groups: dict = {}
        for t in members:
            groups.setdefault(find(t), []).append(t)
        for root in sorted(groups, key=lambda r: min(groups[r])):
            tris = sorted(groups[root])
            if any(f.faces[t] == s for t in tris):
                out.append((s, tris))
    return out


def _local_in_face(f: PLDiscMap, t: int, s: int) -> np.ndarray:
    return np.array([local_xy(f.target, s, f.images[v]) for v in f.triangles[t]])


def degree_at(f: PLDiscMap, s: int, tris: Sequence[int], q) -> int:
    """Signed preimage count of the generic point ``q`` (local coordinates of ``s``)."""
    d = 0
    for t in tris:
        A, B, C = _local_in_face(f, t, s)
        o = _orient(A, B, C)
        if abs(o) <= 1e-15:
            continue
        sgn = 1 if o > 0 else -1
        if all(sgn * _orient(P, Q, q) > 0 for P, Q in ((A, B), (B, C), (C, A))):
            d += sgn
    return d


def _segment_distance(q, a, b) -> float:
    d = b - a
    L = d @ d
    if L == 0:
        return float(np.linalg.norm(q - a))
    t = min(max((q - a) @ d / L, 0.0), 1.0)
    return float(np.linalg.norm(q - a - t * d))


def generic_points(f: PLDiscMap, s: int, tris: Sequence[int], rng, count: int = 5) -> list:
    """Uniform points of the open simplex away from the images of domain edges."""
    segs = []
    for t in tris:
        A, B, C = _local_in_face(f, t, s)
        segs += [(A, B), (B, C), (C, A)]
    V = to_plane(np.eye(3))
    out = []
    while len(out) < count:
        b = rng.dirichlet(np.ones(3))
        q = b @ V
        if min(b) > TOL and all(_segment_distance(q, a, c) > TOL for a, c in segs):
            out.append(q)
    return out


def component_degrees(f: PLDiscMap, seed=0, samples: int = 5) -> DegreeReport:
    """Degree and image area of every preimage component."""
    comps = []
    for k, (s, tris) in enumerate(preimage_components(f)):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), s, k]))
        degs = [degree_at(f, s, tris, q) for q in generic_points(f, s, tris, rng, samples)]
        area = sum(f.image_area(t) for t in tris)
        d = degs[0]
        comps.append(ComponentDegree(s, tris, d, float(area), area >= TRIANGLE_AREA * abs(d) - TOL, degs))
    return DegreeReport(comps, sum(abs(c.degree) for c in comps), float(sum(c.area for c in comps)))


# -- aligned maps and diagrams ------------------------------------------------------------------------

@dataclass
class AlignedCertificate:
    def51_area: int
    total_abs_degree: int
    geometric_area: float
    normalised_area: float  # (2 / sqrt 3) * geometric area
    uniform_orientation: bool
    degree_ok: bool  # def51_area >= sum |d_X|
    tight: bool  # def51_area == sum |d_X|

    def to_dict(self) -> dict:
        return asdict(self)


def disc_to_degenerate_diagram(f: PLDiscMap, seed=0) -> tuple:
    """The simplicial map of an aligned disc map as a degenerate diagram, with a certificate."""
    if not f.aligned:
        raise DiscMapError("every domain vertex must map to a target vertex")
    f.validate()
    vmap = [k[1] for k in f.images]
    D = diagram_from_triangles(f.target, f.triangles, f.boundary, vmap)
    D.check_simplicial_map()
    rep = component_degrees(f, seed)
    signs = {(f.faces[t], 1 if f.jacobian(t) > 0 else -1) for t in range(len(f.triangles))
             if abs(f.jacobian(t)) > TOL}
    uniform = len({sg for s, sg in signs}) <= 1 and all((s, -sg) not in signs for s, sg in signs)
    geo = sum(f.image_area(t) for t in range(len(f.triangles)))
    cert = AlignedCertificate(D.area, rep.total_abs_degree, float(geo), float(geo / TRIANGLE_AREA), uniform,
                              D.area >= rep.total_abs_degree, D.area == rep.total_abs_degree)
    return D, cert


def _grid_domain(n: int) -> tuple:
    dom = disc_grid(n)
    tris = [dom.face_vertices(k) for k in range(len(dom.faces))]

    def vid(i, j):
        return j * (n + 1) + i

    ring = [vid(i, 0) for i in range(n)] + [vid(n, j) for j in range(n)]
    ring += [vid(i, n) for i in range(n, 0, -1)] + [vid(0, j) for j in range(n, 0, -1)]
    return dom.positions.astype(float), tris, ring


def _face_for(K: Complex2, keys) -> Optional[int]:
    vs = frozenset().union(*(carrier(K, k) for k in keys))
    fixed = {k[1] for k in keys if k[0] == "f"}
    if len(fixed) > 1:
        return None
    if fixed:
        (f,) = fixed
        return f if vs <= set(K.face_vertices(f)) else None
    for f in range(len(K.faces)):
        if vs <= set(K.face_vertices(f)):
            return f
    return None


def random_disc_map(seed, n: Optional[int] = None) -> PLDiscMap:
    """Random map of a grid disc into one 2-simplex with combinatorial boundary.

    Interior vertices go to random interior, edge or vertex points, so the
    map folds and wraps freely; boundary vertices follow a closed walk on the
    three corners.
    """
    rng = np.random.default_rng(seed)
    n = int(n if n is not None else rng.integers(1, 4))
    K = single_triangle()
    pos, tris, ring = _grid_domain(n)
    walk = [int(rng.integers(3))]
    for k in range(1, len(ring)):
        choices = [c for c in range(3) if c != walk[-1] and (k < len(ring) - 1 or c != walk[0])]
        walk.append(int(rng.choice(choices)))
    images: list = [None] * len(pos)
    for v, c in zip(ring, walk):
        images[v] = ("v", c)
    for v in range(len(pos)):
        if images[v] is not None:
            continue
        u = rng.random()
        if u < 0.6:
            images[v] = ("f", 0, *[float(x) for x in rng.dirichlet(np.ones(3))])
        elif u < 0.85:
            b = [0.0, 0.0, 0.0]
            j = int(rng.integers(3))
            t = float(rng.uniform(0.05, 0.95))
            b[j], b[(j + 1) % 3] = 1 - t, t
            images[v] = normalize_point(K, ("f", 0, *b))
        else:
            images[v] = ("v", int(rng.integers(3)))
    f = PLDiscMap(K, pos, tris, images, [0] * len(tris), ring)
    f.validate()
    return f


def random_aligned_map(seed, n: int = 3, target: str = "torus", moves: int = 6) -> PLDiscMap:
    """Aligned map of a grid disc with every homeomorphic piece positively oriented.

    Starts from the identity onto ``disc_grid(n)`` or the wrap onto
    ``torus(3)`` and repeatedly sends an interior vertex to a neighbour's
    image when the result stays simplicial and orientation preserving.
    """
    rng = np.random.default_rng(seed)
    pos, tris, ring = _grid_domain(n)
    if target == "torus":
        K = torus(3)
        phi = [int((j % 3) * 3 + (i % 3)) for i, j in pos.astype(int)]
    elif target == "disc":
        K = disc_grid(n)
        phi = list(range(len(pos)))
    else:
        raise ValueError(f"unknown target {target!r}")
    idx, fidx = K.edge_index(), K.face_index()
    on_ring = set(ring)
    interior = [v for v in range(len(pos)) if v not in on_ring]
    nbrs: dict = {}
    for t in tris:
        for v in t:
            nbrs.setdefault(v, set()).update(t)

    def ok(tri, m):
        vs = [m[v] for v in tri]
        distinct = set(vs)
        if len(distinct) == 3:
            f = fidx.get(frozenset(vs))
            if f is None:
                return False
            fv = K.face_vertices(f)
            i = fv.index(vs[0])
            return (fv[i:] + fv[:i]) == tuple(vs)
        if len(distinct) == 2:
            a, b = distinct
            return (a, b) in idx
        return True

    for _ in range(moves if interior else 0):
        x = int(rng.choice(interior))
        y = int(rng.choice(sorted(nbrs[x] - {x})))
        trial = list(phi)
        trial[x] = phi[y]
        if all(ok(t, trial) for t in tris if x in t):
            phi = trial
    images = [("v", v) for v in phi]
    faces = [_face_for(K, [images[v] for v in t]) for t in tris]
    f = PLDiscMap(K, pos, tris, images, faces, ring)
    f.validate()
    return f


def example_map(name: str) -> PLDiscMap:
    """Small hand-built maps into a single 2-simplex."""
    K = single_triangle()
    O = ("f", 0, 1 / 3, 1 / 3, 1 / 3)
    if name == "identity":
        return PLDiscMap(K, [[0, 0], [1, 0], [0, 1]], [(0, 1, 2)], [("v", 0), ("v", 1), ("v", 2)], [0], [0, 1, 2])
    if name in ("wrap2", "fold"):
        m = 6 if name == "wrap2" else 4
        ring_pos = [[math.cos(2 * math.pi * k / m), math.sin(2 * math.pi * k / m)] for k in range(m)]
        pos = [[0.0, 0.0]] + ring_pos
        tris = [(0, 1 + k, 1 + (k + 1) % m) for k in range(m)]
        corners = [0, 1, 2] * 2 if name == "wrap2" else [0, 1, 0, 1]
        images = [O] + [("v", c) for c in corners]
        return PLDiscMap(K, pos, tris, images, [0] * m, list(range(1, m + 1)))
    if name == "fold_pair":
        # two whole copies of the simplex with opposite orientations, folded along an edge
        pos = [[0, 0], [1, 0], [0, 1], [-1, 0]]
        images = [("v", 0), ("v", 1), ("v", 2), ("v", 1)]
        return PLDiscMap(K, pos, [(0, 1, 2), (0, 2, 3)], images, [0, 0], [0, 1, 2, 3])
    if name == "skeleton":
        # the whole square goes into one edge
        pos = [[0, 0], [1, 0], [1, 1], [0, 1]]
        images = [("v", 0), ("v", 1), ("v", 0), ("v", 1)]
        return PLDiscMap(K, pos, [(0, 1, 2), (0, 2, 3)], images, [0, 0], [0, 1, 2, 3])
    raise ValueError(f"unknown example {name!r}")
