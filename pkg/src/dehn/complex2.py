"""Polygonal and simplicial 2-complexes.

Edges are oriented ``(tail, head)`` pairs; a face is a closed edge path given
as a tuple of ``(edge, sign)`` pairs, ``sign = +1`` traversing tail to head.
Every 2-simplex carries the same metric: the standard simplex spanned by
``e1, e2, e3`` in R^3 (side sqrt 2, area sqrt 3 / 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

SIDE = math.sqrt(2.0)
TRIANGLE_AREA = math.sqrt(3.0) / 2.0
INRADIUS = 1.0 / math.sqrt(6.0)
CIRCUMRADIUS = math.sqrt(2.0 / 3.0)
STANDARD_VERTICES = np.eye(3)
BARYCENTER = np.full(3, 1.0 / 3.0)

# orthonormal frame of the plane x + y + z = 1, origin at e1
_U1 = (STANDARD_VERTICES[1] - STANDARD_VERTICES[0]) / SIDE
_U2 = np.cross(np.ones(3) / math.sqrt(3.0), _U1)


def to_plane(bary) -> np.ndarray:
    """Barycentric (= standard-embedding) coordinates to 2D frame coordinates."""
    p = np.asarray(bary, dtype=float) - STANDARD_VERTICES[0]
    return np.stack([p @ _U1, p @ _U2], axis=-1)


def from_plane(xy) -> np.ndarray:
    xy = np.asarray(xy, dtype=float)
    return STANDARD_VERTICES[0] + xy[..., :1] * _U1 + xy[..., 1:2] * _U2


class ComplexError(ValueError):
    pass


@dataclass
class Complex2:
    n_vertices: int
    edges: list = field(default_factory=list)
    faces: list = field(default_factory=list)
    positions: Optional[np.ndarray] = None  # optional planar layout, not part of the metric
    provenance: Optional[list] = None  # face -> face index of the complex this was subdivided from

    def __post_init__(self):
        self.edges = [tuple(int(v) for v in e) for e in self.edges]
        self.faces = [tuple((int(e), int(s)) for e, s in f) for f in self.faces]
        self.check_closed()

    # -- structure ---------------------------------------------------------

    def endpoints(self, e: int, s: int) -> tuple:
        t, h = self.edges[e]
        return (t, h) if s > 0 else (h, t)

    def face_vertices(self, f: int) -> tuple:
        return tuple(self.endpoints(e, s)[0] for e, s in self.faces[f])

    def check_closed(self):
        for v in (x for e in self.edges for x in e):
            if not 0 <= v < self.n_vertices:
                raise ComplexError(f"edge endpoint {v} out of range")
        for i, f in enumerate(self.faces):
            if not f:
                raise ComplexError(f"face {i} has an empty attaching cycle")
            for k, (e, s) in enumerate(f):
                if not 0 <= e < len(self.edges) or s not in (1, -1):
                    raise ComplexError(f"face {i} references bad edge {e}{'+' if s > 0 else '-'}")
                head = self.endpoints(e, s)[1]
                nxt = self.endpoints(*f[(k + 1) % len(f)])[0]
                if head != nxt:
                    raise ComplexError(f"face {i} attaching cycle is not a closed path")

    def simplicial_violations(self) -> list[str]:
        out = []
        pairs = set()
        for i, (t, h) in enumerate(self.edges):
            if t == h:
                out.append(f"edge {i} is a loop")
            key = frozenset((t, h))
            if key in pairs:
                out.append(f"edge {i} duplicates the endpoint pair {sorted(key)}")
            pairs.add(key)
        triples = set()
        for i, f in enumerate(self.faces):
            if len(f) != 3:
                out.append(f"face {i} has length {len(f)}")
                continue
            vs = self.face_vertices(i)
            if len(set(vs)) != 3:
                out.append(f"face {i} repeats a vertex")
            key = frozenset(vs)
            if key in triples:
                out.append(f"face {i} duplicates the vertex triple {sorted(key)}")
            triples.add(key)
        return out

    @property
    def simplicial(self) -> bool:
        return not self.simplicial_violations()

    def euler_characteristic(self) -> int:
        return self.n_vertices - len(self.edges) + len(self.faces)

    # -- lookup tables for simplicial complexes ---------------------------------

    def edge_index(self) -> dict:
        """``{(u, v): (edge, sign)}`` for both orientations of every edge."""
        out = {}
        for i, (t, h) in enumerate(self.edges):
            out[(t, h)] = (i, 1)
            out[(h, t)] = (i, -1)
        return out

    def face_index(self) -> dict:
        return {frozenset(self.face_vertices(i)): i for i in range(len(self.faces))}

    def edge_faces(self) -> dict:
        out: dict = {}
        for i, f in enumerate(self.faces):
            for e, _ in f:
                out.setdefault(e, []).append(i)
        return out

    def neighbours(self) -> dict:
        adj: dict = {v: set() for v in range(self.n_vertices)}
        for t, h in self.edges:
            adj[t].add(h)
            adj[h].add(t)
        return adj

    # -- file format ---------------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"V {self.n_vertices}"]
        lines += [f"E {t} {h}" for t, h in self.edges]
        lines += ["F " + " ".join(f"{e}{'+' if s > 0 else '-'}" for e, s in f) for f in self.faces]
        if self.positions is not None:
            lines += [f"P {i} {x!r} {y!r}" for i, (x, y) in enumerate(np.asarray(self.positions).tolist())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Complex2":
        n = None
        edges, faces, pos = [], [], {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tag, *rest = line.split()
            try:
                if tag == "V":
                    n = int(rest[0])
                elif tag == "E":
                    edges.append((int(rest[0]), int(rest[1])))
                elif tag == "F":
                    faces.append(tuple((int(tok[:-1]), 1 if tok[-1] == "+" else -1) for tok in rest
                                       if tok[-1] in "+-" or _bad(tok)))
                elif tag == "P":
                    pos[int(rest[0])] = (float(rest[1]), float(rest[2]))
                else:
                    raise ComplexError(f"line {lineno}: unknown section {tag!r}")
            except (IndexError, ValueError) as exc:
                raise ComplexError(f"line {lineno}: {exc}") from None
        if n is None:
            raise ComplexError("missing 'V n' line")
        positions = None
        if pos:
            positions = np.array([pos[i] for i in range(n)])
        return cls(n, edges, faces, positions)


def _bad(tok):
    raise ComplexError(f"face token {tok!r} must end in + or -")


def validate(C: Complex2, require_simplicial: bool = False) -> None:
    C.check_closed()
    if require_simplicial:
        bad = C.simplicial_violations()
        if bad:
            raise ComplexError("; ".join(bad))


# -- constructions ---------------------------------------------------------------

def presentation_complex(P) -> Complex2:
    """One vertex, a loop edge per generator, a face per relator spelled along it."""
    edges = [(0, 0)] * P.generator_count
    faces = []
    for r in P.relators:
        if not r:
            raise ComplexError("empty relator")
        faces.append(tuple((abs(x) - 1, 1 if x > 0 else -1) for x in r))
    return Complex2(1, edges, faces)


def _cone_pass(C: Complex2) -> Complex2:
    """Cone every face that is not already a valid triangle from a new centre."""
    n = C.n_vertices
    edges = list(C.edges)
    faces, prov = [], []
    for i, f in enumerate(C.faces):
        if len(f) == 3 and len(set(C.face_vertices(i))) == 3:
            faces.append(f)
            prov.append(i)
            continue
        c = n
        n += 1
        spokes = []
        for e, s in f:
            spokes.append(len(edges))
            edges.append((C.endpoints(e, s)[0], c))
        k = len(f)
        for j, (e, s) in enumerate(f):
            # corner j -> corner j+1 -> centre -> corner j
            faces.append(((e, s), (spokes[(j + 1) % k], 1), (spokes[j], -1)))
            prov.append(i)
    return Complex2(n, edges, faces, provenance=prov)


def barycentric_subdivision(C: Complex2) -> Complex2:
    """Barycentric subdivision of a complex whose faces are all triangles.

    Vertices: old vertices, then one per edge, then one per face.
    """
    nv, ne = C.n_vertices, len(C.edges)
    edges, faces, prov = [], [], []
    half = {}  # (edge, end) -> new edge from the old endpoint to the midpoint
    for i, (t, h) in enumerate(C.edges):
        m = nv + i
        half[(i, 0)] = len(edges)
        edges.append((t, m))
        half[(i, 1)] = len(edges)
        edges.append((h, m))
    for fi, f in enumerate(C.faces):
        if len(f) != 3:
            raise ComplexError("barycentric subdivision needs triangular faces")
        c = nv + ne + fi
        to_mid = {}
        for e, _ in f:
            if e not in to_mid:
                to_mid[e] = len(edges)
                edges.append((nv + e, c))
        # several corners may sit at one vertex; give each its own spoke
        spokes = []
        for e, s in f:
            t, _ = C.endpoints(e, s)
            spokes.append(len(edges))
            edges.append((t, c))
        for j, (e, s) in enumerate(f):
            t, h = C.endpoints(e, s)
            m = nv + e
            first = (e, 0) if s > 0 else (e, 1)  # half of e at t
            second = (e, 1) if s > 0 else (e, 0)
            k0, k1 = spokes[j], spokes[(j + 1) % 3]
            # triangle t -> m -> c -> t and m -> h -> c -> m
            faces.append(((half[first], 1), (to_mid[e], 1), (k0, -1)))
            faces.append(((half[second], -1), (k1, 1), (to_mid[e], -1)))
            prov.append(fi)
            prov.append(fi)
    return Complex2(nv + ne + len(C.faces), edges, faces, provenance=prov)


def triangulate(C: Complex2, max_passes: int = 3) -> Complex2:
    """Subdivide ``C`` into a simplicial complex.

    Cone each non-triangular face, then apply barycentric subdivision until
    the simplicial conditions hold.  ``provenance`` maps each output face to
    the face of ``C`` it came from.
    """
    if C.simplicial:
        return C
    out = _cone_pass(C)
    prov = list(out.provenance)
    passes = 0
    while not out.simplicial:
        if passes >= max_passes:
            raise ComplexError("triangulation did not become simplicial")
        out = barycentric_subdivision(out)
        prov = [prov[p] for p in out.provenance]
        passes += 1
    out.provenance = prov
    return out


# -- standard models --------------------------------------------------------------

def disc_grid(n: int) -> Complex2:
    """``n x n`` square grid, each square split by its (i, j) -> (i+1, j+1) diagonal."""
    if n < 1:
        raise ValueError("disc_grid needs n >= 1")

    def vid(i, j):
        return j * (n + 1) + i

    edges, index = [], {}

    def edge(a, b):
        if (a, b) in index:
            return index[(a, b)]
        if (b, a) in index:
            e, s = index[(b, a)]
            return e, -s
        index[(a, b)] = (len(edges), 1)
        edges.append((a, b))
        return index[(a, b)]

    for j in range(n + 1):
        for i in range(n):
            edge(vid(i, j), vid(i + 1, j))
    for j in range(n):
        for i in range(n + 1):
            edge(vid(i, j), vid(i, j + 1))
    for j in range(n):
        for i in range(n):
            edge(vid(i, j), vid(i + 1, j + 1))
    faces = []
    for j in range(n):
        for i in range(n):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            faces.append((edge(a, b), edge(b, c), edge(c, a)))
            faces.append((edge(a, c), edge(c, d), edge(d, a)))
    pos = np.array([(i, j) for j in range(n + 1) for i in range(n + 1)], dtype=float)
    return Complex2((n + 1) ** 2, edges, faces, pos)


def single_triangle() -> Complex2:
    pos = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
    return Complex2(3, [(0, 1), (1, 2), (2, 0)], [((0, 1), (1, 1), (2, 1))], pos)


def annulus(n: int) -> Complex2:
    """Annulus with ``n`` radial layers and ``max(3, 4n)`` angular steps."""
    if n < 1:
        raise ValueError("annulus needs n >= 1")
    m = max(3, 4 * n)

    def vid(ring, k):
        return ring * m + k % m

    edges, index = [], {}

    def edge(a, b):
        if (b, a) in index:
            e, s = index[(b, a)]
            return e, -s
        if (a, b) not in index:
            index[(a, b)] = (len(edges), 1)
            edges.append((a, b))
        return index[(a, b)]

    faces = []
    for ring in range(n + 1):
        for k in range(m):
            edge(vid(ring, k), vid(ring, k + 1))
    for ring in range(n):
        for k in range(m):
            a, b = vid(ring, k), vid(ring, k + 1)
            c, d = vid(ring + 1, k + 1), vid(ring + 1, k)
            faces.append((edge(a, b), edge(b, c), edge(c, a)))
            faces.append((edge(a, c), edge(c, d), edge(d, a)))
    pos = np.array([((1 + ring) * math.cos(2 * math.pi * k / m), (1 + ring) * math.sin(2 * math.pi * k / m))
                    for ring in range(n + 1) for k in range(m)])
    return Complex2((n + 1) * m, edges, faces, pos)


def torus(m: int = 3) -> Complex2:
    """``m x m`` periodic grid: a simplicial torus, i.e. a model of Z^2."""
    if m < 3:
        raise ValueError("torus needs m >= 3 to be simplicial")

    def vid(i, j):
        return (j % m) * m + (i % m)

    edges, index = [], {}

    def edge(a, b):
        if (b, a) in index:
            e, s = index[(b, a)]
            return e, -s
        if (a, b) not in index:
            index[(a, b)] = (len(edges), 1)
            edges.append((a, b))
        return index[(a, b)]

    faces = []
    for j in range(m):
        for i in range(m):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            faces.append((edge(a, b), edge(b, c), edge(c, a)))
            faces.append((edge(a, c), edge(c, d), edge(d, a)))
    return Complex2(m * m, edges, faces)


_MODELS = {
    "disc_grid": disc_grid,
    "single_triangle": lambda size=1: single_triangle(),
    "annulus": annulus,
    "torus": torus,
}


def standard_model(name: str, size: int = 1) -> Complex2:
    try:
        build = _MODELS[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; choose from {sorted(_MODELS)}") from None
    return build(size)
