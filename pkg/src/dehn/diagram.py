"""Van Kampen diagrams over simplicial targets, degenerate and combinatorial.

A diagram is a planar contractible 2-complex (the *domain*) together with a
simplicial map into a target complex ``K``, stored as the image of every
domain vertex.  Faces are oriented counterclockwise and so is the outer
boundary cycle, so each interior edge is traversed once in each direction by
the faces, and each boundary edge once by a face and once by the reversed
boundary (the *cap*).  Planarity is checked combinatorially: capping the
boundary with one extra disc must give a 2-sphere.

``collapse`` turns a degenerate diagram (simplices may be squashed) into a
combinatorial one with the same boundary word and no larger area, excising
any 2-spheres that appear along the way.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .complex2 import Complex2, disc_grid, torus
from .presentation import (
    AreaLimits,
    AreaResult,
    area_search,
    canonical_cyclic,
    free_reduce,
    inverse,
)


class DiagramError(ValueError):
    pass


class CollapseError(DiagramError):
    pass


def _edge_end(e: int, s: int, arriving: bool) -> tuple:
    # end 0 is the tail, end 1 the head
    if arriving:
        return (e, 1 if s > 0 else 0)
    return (e, 0 if s > 0 else 1)


def _tail(edges, e, s):
    t, h = edges[e]
    return t if s > 0 else h


@dataclass
class SurfaceCheck:
    """Outcome of analysing the capped domain as a closed surface."""

    components: list  # list of dicts: cycles, vertex copies, edges, euler
    cap_component: Optional[int]
    rotation: dict  # vertex -> list of edge ends, only when the vertex has one link cycle
    duplicated: set  # vertices with several link cycles inside one component


def _capped_cycles(faces: dict, boundary: Sequence) -> dict:
    cycles = {("f", k): tuple(c) for k, c in faces.items()}
    if boundary:
        cycles[("cap",)] = tuple((e, -s) for e, s in reversed(boundary))
    return cycles


def _analyse_surface(edges: dict, faces: dict, boundary: Sequence) -> SurfaceCheck:
    """Split the capped domain along vertex links and measure each piece."""
    cycles = _capped_cycles(faces, boundary)
    sides: dict = {}
    for key, cyc in cycles.items():
        for e, s in cyc:
            sides.setdefault(e, []).append((key, s))
    for e in edges:
        signs = sorted(s for _, s in sides.get(e, []))
        if signs != [-1, 1]:
            raise DiagramError(f"edge {e} is not traversed once in each direction by faces and cap")
    nxt: dict = {}  # outgoing edge end -> incoming edge end of the same corner
    corner_cycle: dict = {}
    for key, cyc in cycles.items():
        for k, (e, s) in enumerate(cyc):
            pe, ps = cyc[k - 1]
            out_end = _edge_end(e, s, arriving=False)
            in_end = _edge_end(pe, ps, arriving=True)
            nxt[out_end] = in_end
            corner_cycle[out_end] = key
    # link cycles -> vertex copies
    copy_of: dict = {}
    copies: list = []
    for start in sorted(nxt):
        if start in copy_of:
            continue
        orbit = []
        x = start
        while x not in copy_of:
            copy_of[x] = len(copies)
            orbit.append(x)
            x = nxt[x]
        if x != start:
            raise DiagramError("corner structure is not a permutation")
        e, end = start
        copies.append((edges[e][end], orbit))
    # components of cycles glued along edges
    parent = {key: key for key in cycles}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e, ss in sides.items():
        a, b = find(ss[0][0]), find(ss[1][0])
        if a != b:
            parent[max(a, b)] = min(a, b)
    roots = sorted({find(k) for k in cycles})
    comp_index = {r: i for i, r in enumerate(roots)}
    comps = [{"cycles": [], "copies": [], "edges": set(), "euler": 0} for _ in roots]
    for key in sorted(cycles):
        comps[comp_index[find(key)]]["cycles"].append(key)
    for e, ss in sides.items():
        comps[comp_index[find(ss[0][0])]]["edges"].add(e)
    for ci, (v, orbit) in enumerate(copies):
        comps[comp_index[find(corner_cycle[orbit[0]])]]["copies"].append(v)
    duplicated = set()
    for c in comps:
        c["euler"] = len(c["copies"]) - len(c["edges"]) + len(c["cycles"])
        seen = set()
        for v in c["copies"]:
            if v in seen:
                duplicated.add(v)
            seen.add(v)
    cap = comp_index[find(("cap",))] if boundary else None
    per_vertex: dict = {}
    for v, orbit in copies:
        per_vertex.setdefault(v, []).append(orbit)
    rotation = {}
    for v, orbits in per_vertex.items():
        if len(orbits) == 1:
            orbit = orbits[0]
            i = orbit.index(min(orbit))
            rotation[v] = orbit[i:] + orbit[:i]
    return SurfaceCheck(comps, cap, rotation, duplicated)


# -- the diagram type ------------------------------------------------------------

@dataclass
class VanKampenDiagram:
    target: Complex2
    n_vertices: int
    edges: list
    faces: list
    boundary: tuple
    vertex_map: list
    _target_edges: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.edges = [tuple(int(x) for x in e) for e in self.edges]
        self.faces = [tuple((int(e), int(s)) for e, s in f) for f in self.faces]
        self.boundary = tuple((int(e), int(s)) for e, s in self.boundary)
        self.vertex_map = [int(v) for v in self.vertex_map]
        if len(self.vertex_map) != self.n_vertices:
            raise DiagramError("vertex_map must give an image for every vertex")
        self._target_edges = self.target.edge_index()
        for v in self.vertex_map:
            if not 0 <= v < self.target.n_vertices:
                raise DiagramError(f"vertex image {v} is not a target vertex")
        for i, (t, h) in enumerate(self.edges):
            a, b = self.vertex_map[t], self.vertex_map[h]
            if a != b and (a, b) not in self._target_edges:
                raise DiagramError(f"edge {i} maps onto a non-edge ({a}, {b}) of the target")
        for cyc in list(self.faces) + ([self.boundary] if self.boundary else []):
            for k, (e, s) in enumerate(cyc):
                if not 0 <= e < len(self.edges):
                    raise DiagramError(f"cycle references missing edge {e}")
                t, h = self.edges[e] if s > 0 else self.edges[e][::-1]
                nt = _tail(self.edges, *cyc[(k + 1) % len(cyc)])
                if h != nt:
                    raise DiagramError("face or boundary cycle is not closed")

    # -- maps ---------------------------------------------------------------------

    def edge_image(self, e: int) -> Optional[tuple]:
        """Target ``(edge, sign)`` or ``None`` when the edge is squashed to a vertex."""
        t, h = self.edges[e]
        a, b = self.vertex_map[t], self.vertex_map[h]
        return None if a == b else self._target_edges[(a, b)]

    def face_image(self, f: int) -> Optional[int]:
        """Target face index when the face is mapped homeomorphically."""
        vs = [self.vertex_map[_tail(self.edges, e, s)] for e, s in self.faces[f]]
        if len(self.faces[f]) != 3 or len(set(vs)) != 3:
            return None
        return self.target.face_index().get(frozenset(vs))

    @property
    def degenerate(self) -> bool:
        return any(self.edge_image(e) is None for e in range(len(self.edges)))

    @property
    def boundary_word(self) -> tuple:
        """Target edge path read along the boundary, squashed edges omitted."""
        out = []
        for e, s in self.boundary:
            img = self.edge_image(e)
            if img is not None:
                out.append((img[0], img[1] * s))
        return tuple(out)

    @property
    def area(self) -> int:
        """Number of faces mapped homeomorphically onto a 2-simplex."""
        return sum(self.face_image(f) is not None for f in range(len(self.faces)))

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - len(self.edges) + len(self.faces)

    # -- checks -------------------------------------------------------------------

    def surface(self) -> SurfaceCheck:
        return _analyse_surface(dict(enumerate(self.edges)), dict(enumerate(self.faces)), self.boundary)

    def check_planar(self) -> None:
        """Domain is connected and capping it yields a 2-sphere."""
        if not self.boundary:
            if self.n_vertices == 1 and not self.edges and not self.faces:
                return
            raise DiagramError("a diagram with empty boundary must be a single vertex")
        sc = self.surface()
        if len(sc.components) != 1:
            raise DiagramError(f"capped domain has {len(sc.components)} components")
        if sc.duplicated:
            raise DiagramError(f"vertices {sorted(sc.duplicated)} have disconnected links")
        used = {v for e in self.edges for v in e}
        if len(used) != self.n_vertices:
            raise DiagramError("domain has isolated vertices")
        if sc.components[0]["euler"] != 2:
            raise DiagramError("capped domain is not a sphere")
        if self.euler_characteristic != 1:
            raise DiagramError("domain Euler characteristic is not 1")

    def check_simplicial_map(self) -> None:
        for f in range(len(self.faces)):
            if len(self.faces[f]) != 3:
                raise DiagramError(f"face {f} is not a triangle")
            vs = {self.vertex_map[_tail(self.edges, e, s)] for e, s in self.faces[f]}
            if len(vs) == 3 and self.face_image(f) is None:
                raise DiagramError(f"face {f} maps onto a non-face of the target")

    def check_combinatorial(self) -> None:
        self.check_planar()
        for e in range(len(self.edges)):
            if self.edge_image(e) is None:
                raise DiagramError(f"edge {e} is squashed to a vertex")
        for f in range(len(self.faces)):
            if self.face_image(f) is None:
                raise DiagramError(f"face {f} is not mapped homeomorphically onto a 2-simplex")

    def validate(self) -> None:
        self.check_planar()
        self.check_simplicial_map()
        if not self.degenerate:
            self.check_combinatorial()

    # -- serialisation -------------------------------------------------------------------

    def to_json(self) -> str:
        rotation = []
        if self.boundary:
            rot = self.surface().rotation
            rotation = [[list(end) for end in rot.get(v, [])] for v in range(self.n_vertices)]
        doc = {
            "vertices": self.n_vertices,
            "edges": [list(e) for e in self.edges],
            "faces": [[list(x) for x in f] for f in self.faces],
            "rotation": rotation,
            "boundary": [list(x) for x in self.boundary],
            "map": list(self.vertex_map),
            "degenerate": self.degenerate,
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str, target: Complex2) -> "VanKampenDiagram":
        doc = json.loads(text)
        try:
            D = cls(target, doc["vertices"], doc["edges"], doc["faces"], doc["boundary"], doc["map"])
        except KeyError as exc:
            raise DiagramError(f"missing field {exc}") from None
        if bool(doc.get("degenerate", D.degenerate)) != D.degenerate:
            raise DiagramError("'degenerate' flag disagrees with the vertex map")
        return D


# -- Def 5.1 counts on loops ----------------------------------------------------------

def degenerate_length(loop: Sequence[int]) -> int:
    """Edges of a cyclic vertex loop whose endpoints have distinct images."""
    n = len(loop)
    return sum(loop[i] != loop[(i + 1) % n] for i in range(n)) if n > 1 else 0


def degenerate_area(D: VanKampenDiagram) -> int:
    return D.area


def collapse_boundary_loop(loop: Sequence[int]) -> tuple:
    """Drop squashed edges from a cyclic vertex loop, leaving a combinatorial loop."""
    out: list = []
    for v in loop:
        if not out or out[-1] != v:
            out.append(v)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return tuple(out) if len(out) > 1 else ()


# -- collapse ---------------------------------------------------------------------------

@dataclass
class CollapseReport:
    diagram: VanKampenDiagram
    excised_sphere_count: int
    area_before: int
    area_after: int
    excised_areas: list = field(default_factory=list)
    sphere_eulers: list = field(default_factory=list)


class _Work:
    """Mutable copy of a diagram used while collapsing."""

    def __init__(self, D: VanKampenDiagram):
        self.target = D.target
        self.vmap = dict(enumerate(D.vertex_map))
        self.edges = dict(enumerate(D.edges))
        self.faces = {k: list(f) for k, f in enumerate(D.faces)}
        self.boundary = list(D.boundary)
        self.spheres: list = []  # (area, euler) per excised sphere
        self.face_index = D.target.face_index()

    def face_is_homeo(self, cyc) -> bool:
        vs = [self.vmap[_tail(self.edges, e, s)] for e, s in cyc]
        return len(cyc) == 3 and len(set(vs)) == 3 and frozenset(vs) in self.face_index

    def preimage_components(self, v: int) -> list:
        verts = sorted(x for x, img in self.vmap.items() if img == v)
        inside = set(verts)
        parent = {x: x for x in verts}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for t, h in self.edges.values():
            if t in inside and h in inside:
                a, b = find(t), find(h)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        groups: dict = {}
        for x in verts:  # discovery order = order of least vertex
            groups.setdefault(find(x), []).append(x)
        return [g for g in groups.values()]

    def contract(self, L: list) -> None:
        S = set(L)
        rep = min(L)
        dead = {e for e, (t, h) in self.edges.items() if t in S and h in S}
        self.boundary = [(e, s) for e, s in self.boundary if e not in dead]
        if not self.boundary:
            raise CollapseError("the whole boundary is squashed to a vertex")
        for k in [k for k, cyc in self.faces.items()
                  if all(_tail(self.edges, e, s) in S for e, s in cyc)]:
            del self.faces[k]
        for k, cyc in self.faces.items():
            self.faces[k] = [(e, s) for e, s in cyc if e not in dead]
        for e in dead:
            del self.edges[e]
        for e, (t, h) in list(self.edges.items()):
            self.edges[e] = (rep if t in S else t, rep if h in S else h)
        for x in S - {rep}:
            del self.vmap[x]

    def fold_bigons(self) -> None:
        while True:
            hit = next(((k, c) for k, c in sorted(self.faces.items())
                        if len(c) == 2 and c[0][0] != c[1][0]), None)
            if hit is None:
                return
            k, ((e1, s1), (e2, s2)) = hit
            t = -s1 * s2  # (e2, +) is the same oriented edge as (e1, t)
            del self.faces[k]
            del self.edges[e2]
            for kk, cyc in self.faces.items():
                self.faces[kk] = [(e1, t * s) if e == e2 else (e, s) for e, s in cyc]
            self.boundary = [(e1, t * s) if e == e2 else (e, s) for e, s in self.boundary]

    def excise_spheres(self) -> None:
        if not self.boundary:
            raise CollapseError("empty boundary: nothing to collapse onto")
        sc = _analyse_surface(self.edges, self.faces, self.boundary)
        kept = sc.components[sc.cap_component]
        for i, comp in enumerate(sc.components):
            if i == sc.cap_component:
                continue
            if comp["euler"] != 2:
                raise CollapseError(f"excised component has Euler characteristic {comp['euler']}, not a sphere")
            area = sum(self.face_is_homeo(self.faces[key[1]]) for key in comp["cycles"])
            self.spheres.append((area, comp["euler"]))
            for key in comp["cycles"]:
                del self.faces[key[1]]
            for e in comp["edges"]:
                del self.edges[e]
        if len(set(kept["copies"])) != len(kept["copies"]):
            raise CollapseError("vertex link is not a single cycle after collapse")
        used = {v for e in self.edges.values() for v in e}
        for x in [x for x in self.vmap if x not in used]:
            del self.vmap[x]

    def freeze(self) -> VanKampenDiagram:
        vids = {x: i for i, x in enumerate(sorted(self.vmap))}
        eids = {e: i for i, e in enumerate(sorted(self.edges))}
        edges = [(vids[self.edges[e][0]], vids[self.edges[e][1]]) for e in sorted(self.edges)]
        faces = [tuple((eids[e], s) for e, s in self.faces[k]) for k in sorted(self.faces)]
        boundary = tuple((eids[e], s) for e, s in self.boundary)
        vmap = [self.vmap[x] for x in sorted(self.vmap)]
        return VanKampenDiagram(self.target, len(vmap), edges, faces, boundary, vmap)


def collapse(D: VanKampenDiagram, allow_boundary_collapse: bool = False) -> CollapseReport:
    """Collapse squashed simplices until the map is combinatorial.

    Target vertices are handled in index order and the components of each
    preimage in order of their least vertex.  A component is contracted to
    its least vertex; a triangle that loses an edge this way becomes a bigon
    whose two edges are identified; pieces that pinch off are checked to be
    2-spheres and removed.

    The boundary is expected to be combinatorial already.  With
    ``allow_boundary_collapse`` squashed boundary edges are contracted too,
    which shortens the boundary cycle without changing its word.
    """
    D.check_planar()
    D.check_simplicial_map()
    word = D.boundary_word
    if len(word) != len(D.boundary) and not allow_boundary_collapse:
        raise CollapseError("a boundary edge is squashed to a vertex")
    before = D.area
    w = _Work(D)
    for v in range(D.target.n_vertices):
        # excising a sphere can delete vertices of later components, so rescan
        while True:
            L = next((c for c in w.preimage_components(v) if len(c) > 1), None)
            if L is None:
                break
            w.contract(L)
            w.fold_bigons()
            w.excise_spheres()
    out = w.freeze()
    out.check_combinatorial()
    if out.boundary_word != word:
        raise CollapseError("boundary word changed during collapse")
    after = out.area
    if after > before:
        raise CollapseError("collapse increased the area")
    return CollapseReport(out, len(w.spheres), before, after,
                          [a for a, _ in w.spheres], [x for _, x in w.spheres])


# -- generators --------------------------------------------------------------------------

def grid_diagram(n: int, target: str = "disc") -> VanKampenDiagram:
    """Combinatorial diagram on ``disc_grid(n)``: the identity, or wrapped onto ``torus(3)``."""
    dom = disc_grid(n)
    pos = dom.positions.astype(int)
    if target == "disc":
        K = dom
        vmap = list(range(dom.n_vertices))
    elif target == "torus":
        K = torus(3)
        vmap = [(j % 3) * 3 + (i % 3) for i, j in pos]
    else:
        raise ValueError(f"unknown target {target!r}")
    idx = dom.edge_index()

    def vid(i, j):
        return j * (n + 1) + i

    ring = [vid(i, 0) for i in range(n)] + [vid(n, j) for j in range(n)]
    ring += [vid(i, n) for i in range(n, 0, -1)] + [vid(0, j) for j in range(n, 0, -1)]
    boundary = tuple(idx[(ring[k], ring[(k + 1) % len(ring)])] for k in range(len(ring)))
    return VanKampenDiagram(K, dom.n_vertices, dom.edges, dom.faces, boundary, vmap)


class _Builder:
    """Triangle-list form of a diagram for applying inverse-collapse moves."""

    def __init__(self, D: VanKampenDiagram):
        self.target = D.target
        self.vmap = list(D.vertex_map)
        self.tris = [tuple(_tail(D.edges, e, s) for e, s in f) for f in D.faces]
        self.ring = [_tail(D.edges, e, s) for e, s in D.boundary]

    def new_vertex(self, image: int) -> int:
        self.vmap.append(image)
        return len(self.vmap) - 1

    def boundary_pairs(self) -> set:
        n = len(self.ring)
        return {frozenset((self.ring[k], self.ring[(k + 1) % n])) for k in range(n)}

    def split_triangle(self, k: int, corner: int) -> None:
        a, b, c = self.tris[k]
        x = self.new_vertex(self.vmap[(a, b, c)[corner]])
        self.tris[k:k + 1] = [(a, b, x), (b, c, x), (c, a, x)]

    def split_edge(self, u: int, v: int) -> bool:
        hits = [k for k, t in enumerate(self.tris) if u in t and v in t]
        if len(hits) != 2 or frozenset((u, v)) in self.boundary_pairs():
            return False
        m = self.new_vertex(self.vmap[u])
        new = []
        for k, t in enumerate(self.tris):
            if k not in hits:
                new.append(t)
                continue
            i = t.index(u)
            a, b, c = t[i:] + t[:i]  # a = u
            if b == v:
                new += [(a, m, c), (m, b, c)]
            else:  # c == v
                new += [(a, b, m), (m, b, c)]
        self.tris = new
        return True

    def insert_sphere(self, k: int) -> None:
        a, b, c = self.tris[k]
        A, B, C = (self.vmap[x] for x in (a, b, c))
        y2, y3 = self.new_vertex(A), self.new_vertex(A)
        p, q = self.new_vertex(B), self.new_vertex(C)
        outer = [(a, b, y2), (b, y3, y2), (b, c, y3), (c, a, y3)]
        inner = [(a, y2, p), (y2, q, p), (y2, y3, q), (y3, p, q), (y3, a, p)]
        self.tris[k:k + 1] = outer + inner

    def build(self) -> VanKampenDiagram:
        return diagram_from_triangles(self.target, self.tris, self.ring, self.vmap)


def diagram_from_triangles(target: Complex2, tris: Sequence, ring: Sequence, vmap: Sequence) -> VanKampenDiagram:
    """Diagram from counterclockwise vertex triples, the boundary vertex ring and the vertex map."""
    edges, index, faces = [], {}, []

    def edge(u, v):
        if (v, u) in index:
            e, s = index[(v, u)]
            return e, -s
        if (u, v) not in index:
            index[(u, v)] = (len(edges), 1)
            edges.append((u, v))
        return index[(u, v)]

    for a, b, c in tris:
        faces.append((edge(a, b), edge(b, c), edge(c, a)))
    n = len(ring)
    boundary = tuple(edge(ring[k], ring[(k + 1) % n]) for k in range(n))
    return VanKampenDiagram(target, len(vmap), edges, faces, boundary, list(vmap))


def random_degenerate_diagram(seed: int, n: int = 2, target: str = "torus", depth: int = 5) -> VanKampenDiagram:
    """Start from a grid diagram and apply up to ``depth`` random inverse-collapse moves.

    Moves: split a triangle at a new vertex mapped to one of its corners'
    images; split an interior edge at a new vertex mapped to an endpoint's
    image; replace a triangle by a degenerate fan around a 2-sphere of area 2.
    Every move keeps the map simplicial and leaves the boundary untouched.
    """
    rng = np.random.default_rng(seed)
    B = _Builder(grid_diagram(n, target))
    moves = int(rng.integers(1, depth + 1))
    for _ in range(moves):
        kind = int(rng.integers(3))
        k = int(rng.integers(len(B.tris)))
        if kind == 0:
            B.split_triangle(k, int(rng.integers(3)))
        elif kind == 1:
            t = B.tris[k]
            j = int(rng.integers(3))
            if not B.split_edge(t[j], t[(j + 1) % 3]):
                B.split_triangle(k, j)
        else:
            B.insert_sphere(k)
    D = B.build()
    D.check_planar()
    D.check_simplicial_map()
    return D


# -- area in a simplicial target ----------------------------------------------------------

def face_words(K: Complex2) -> list:
    """Attaching cycles of ``K`` as signed edge words (``+(e+1)`` / ``-(e+1)``)."""
    return [tuple((e + 1) * s for e, s in f) for f in K.faces]


def loop_word(loop: Sequence[int], K: Complex2) -> tuple:
    """Edge word of a cyclic vertex loop in ``K`` (consecutive vertices adjacent)."""
    idx = K.edge_index()
    n = len(loop)
    out = []
    for k in range(n):
        a, b = loop[k], loop[(k + 1) % n]
        if a == b:
            continue
        try:
            e, s = idx[(a, b)]
        except KeyError:
            raise DiagramError(f"({a}, {b}) is not an edge of the target") from None
        out.append((e + 1) * s)
    return tuple(out)


def word_vertex(K: Complex2, x: int) -> int:
    t, h = K.edges[abs(x) - 1]
    return t if x > 0 else h


def complex_area(word: Sequence[int], K: Complex2, limits: Optional[AreaLimits] = None,
                 lower_bound=None) -> AreaResult:
    """Combinatorial area of a closed edge word in ``K`` by best-first search.

    Without a ``lower_bound`` the search is breadth-first in area, which is
    only practical up to area 4 or so.
    """
    limits = limits or AreaLimits()
    word = tuple(word)
    if not canonical_cyclic(word):
        return AreaResult("Exact", 0, 0)
    by_vertex: dict = {}
    for r in face_words(K):
        for rot in set(_rotations(r) + _rotations(inverse(r))):
            by_vertex.setdefault(word_vertex(K, rot[0]), []).append(rot)
    for v in by_vertex:
        by_vertex[v].sort()
    L = max((len(r) for r in face_words(K)), default=1)
    max_len = limits.max_word_length or 2 * len(word) + 2 * L
    return area_search(
        word,
        lambda s, i: by_vertex.get(word_vertex(K, s[i]), ()),
        max_area=limits.max_area,
        max_length=max_len,
        max_nodes=limits.max_nodes,
        lower_bound=lower_bound,
    )


def _rotations(w):
    return [w[i:] + w[:i] for i in range(len(w))]


# -- independent oracle ----------------------------------------------------------------------

def enumerate_area_oracle(word: Sequence[int], target: Complex2, max_cells: int = 8) -> Optional[int]:
    """Minimal diagram area by exhaustive peeling of small diagrams, or ``None``.

    The first boundary letter ``x`` of a disc diagram either bounds no cell,
    in which case it is a bridge and the boundary reads ``x u x^-1 v`` with
    independent subdiagrams for ``u`` and ``v``; or it lies on a cell whose
    boundary, read from ``x``, is ``x r``, and removing the cell leaves a
    diagram for ``r^-1`` followed by the rest.  Exploring both cases with a
    cell budget enumerates every diagram shape up to ``max_cells`` cells.
    """
    rels = face_words(target)
    starting: dict = {}
    for r in rels:
        for rot in set(_rotations(r) + _rotations(inverse(r))):
            starting.setdefault(rot[0], []).append(rot)
    for x in starting:
        starting[x].sort()
    # each cell changes the exponent sum of generator g by at most m[g]
    n_gen = len(target.edges)

    def sums(w):
        out = [0] * n_gen
        for x in w:
            out[abs(x) - 1] += 1 if x > 0 else -1
        return out

    m = [max((abs(sums(r)[g]) for r in rels), default=0) for g in range(n_gen)]
    exact: dict = {}
    floor: dict = {}  # cycle -> strict lower bound learned from failed budgets

    def cells_needed(c) -> Optional[int]:
        need = 0
        for g, sg in enumerate(sums(c)):
            if sg:
                if m[g] == 0:
                    return None
                need = max(need, -(-abs(sg) // m[g]))
        return need

    def solve(c: tuple, budget: int) -> Optional[int]:
        c = canonical_cyclic(c)
        if not c:
            return 0
        if c in exact:
            return exact[c] if exact[c] <= budget else None
        need = cells_needed(c)
        if need is None:
            return None
        lower = max(floor.get(c, 0), need)
        if lower > budget:
            return None
        best = None
        x, rest = c[0], c[1:]
        for j, y in enumerate(rest):
            if y != -x:
                continue
            u, v = rest[:j], rest[j + 1:]
            a = solve(u, budget)
            if a is None:
                continue
            b = solve(v, (best - 1 if best is not None else budget) - a)
            if b is not None and (best is None or a + b < best):
                best = a + b
        for r in starting.get(x, ()):
            cap = (best - 1) if best is not None else budget
            if cap < 1:
                break
            sub = solve(inverse(r[1:]) + rest, cap - 1)
            if sub is not None:
                best = 1 + sub
        if best is not None:
            # minimal among diagrams within this budget, hence globally minimal
            exact[c] = best
            return best
        floor[c] = max(floor.get(c, 0), budget + 1)
        return None

    word = free_reduce(word)
    for b in range(max_cells + 1):
        res = solve(tuple(word), b)
        if res is not None:
            return res
    return None
