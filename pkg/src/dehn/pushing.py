"""Pushing piecewise-linear 1-chains into the 1-skeleton of a simplicial 2-complex.

Inside each 2-simplex ``sigma`` the part ``Q`` of the chain in the open
simplex is first projected radially from a centre ``u`` near the barycentre
``O`` onto the circle ``|x - u| = 2r`` (points outside the circle stay put),
then radially from ``O`` onto the boundary of ``sigma``.  The first centre is
drawn by rejection so that the circle projection stretches ``Q`` by at most
``v0``; the second stretches by a bounded factor because its input keeps
distance ``r`` from ``O``.  The composite gives the pushed chain ``R`` and
the straight-line homotopies sweep a 2-chain ``S`` with ``dS = T - R``.

Points of the complex are keys: ``("v", vertex)``, ``("e", edge, t)`` with
``0 < t < 1`` measured from the edge's tail, or ``("f", face, b0, b1, b2)``
with barycentric coordinates in the face's vertex order.  Each simplex is
the standard one in ``R^3``; computations use its 2D frame from
``complex2.to_plane``.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy import integrate, stats

from .complex2 import BARYCENTER, CIRCUMRADIUS, INRADIUS, SIDE, Complex2, to_plane

DEFAULT_R = 0.12
TOL = 1e-9

_V = to_plane(np.eye(3))  # local vertices, counterclockwise
_O = to_plane(BARYCENTER)


# -- constants ---------------------------------------------------------------------

def unit_sphere_area(i: int) -> float:
    """Area of the unit sphere in ``R^i``."""
    return 2 * math.pi ** (i / 2) / math.gamma(i / 2)


def unit_ball_volume(i: int) -> float:
    return math.pi ** (i / 2) / math.gamma(i / 2 + 1)


def simplex_inradius(i: int) -> float:
    """Inradius of the standard ``i``-simplex (edge length sqrt 2)."""
    return 1.0 / math.sqrt(i * (i + 1))


def simplex_circumradius(i: int) -> float:
    return math.sqrt(i / (i + 1))


@dataclass(frozen=True)
class PushingConstants:
    k: int
    i: int
    r: float
    K: float
    v0: int
    ratio: Fraction  # K / vol(B(O, r)), exact
    ball_volume: float
    C_R: Optional[float] = None  # stretch bound for the pushed chain
    C_S: Optional[float] = None  # bound for the swept 2-chain
    C: Optional[float] = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ratio"] = str(self.ratio)
        return d


def pushing_constants(k: int = 1, i: int = 2, r: float = DEFAULT_R) -> PushingConstants:
    """``K = (2r)^k int_{B(O,3r)} |u|^-k du + vol B(O,r)`` in closed form, and ``v0``.

    The radial integral is ``S_{i-1} (3r)^{i-k} / (i-k)``.  Since
    ``S_{i-1} = i * omega_i`` the ratio ``K / vol B`` is the rational
    ``2^k 3^(i-k) i / (i-k) + 1``, independent of ``r``; ``v0`` is the least
    integer above it.
    """
    if not (1 <= k < i <= 3):
        raise ValueError(f"unsupported dimensions k={k}, i={i}; need 1 <= k < i <= 3")
    if not r > 0:
        raise ValueError("r must be positive")
    if not 3 * r < simplex_inradius(i):
        raise ValueError(f"3r = {3 * r:g} must be below the inradius {simplex_inradius(i):.4f}")
    radial = unit_sphere_area(i) * (3 * r) ** (i - k) / (i - k)
    ball = unit_ball_volume(i) * r**i
    K = (2 * r) ** k * radial + ball
    ratio = Fraction(2**k * 3 ** (i - k) * i, i - k) + 1
    v0 = math.floor(ratio) + 1
    C_R = C_S = C = None
    if (k, i) == (1, 2):
        # |d pi_O| <= Rc^2 / (h * dist(x, O)) and dist >= r after the circle projection
        C_R = v0 * CIRCUMRADIUS**2 / (INRADIUS * r)
        # swept areas: r per unit of pi_u Q, then Rc^2 / (2r) per unit for the O-sweep
        C_S = v0 * (r + CIRCUMRADIUS**2 / (2 * r))
        C = max(C_R, C_S)
    return PushingConstants(k, i, r, K, v0, ratio, ball, C_R, C_S, C)


def quadrature_K(k: int, i: int, r: float) -> float:
    """``K`` by numerical integration in polar / spherical coordinates."""
    if i == 2:
        val, _ = integrate.nquad(lambda s, th: s ** (1 - k), [[0, 3 * r], [0, 2 * math.pi]])
        ball, _ = integrate.nquad(lambda s, th: s, [[0, r], [0, 2 * math.pi]])
    elif i == 3:
        f = lambda s, th, ph: s ** (2 - k) * math.sin(th)  # noqa: E731
        val, _ = integrate.nquad(f, [[0, 3 * r], [0, math.pi], [0, 2 * math.pi]])
        g = lambda s, th, ph: s**2 * math.sin(th)  # noqa: E731
        ball, _ = integrate.nquad(g, [[0, r], [0, math.pi], [0, 2 * math.pi]])
    else:
        raise ValueError("quadrature implemented for i in {2, 3}")
    return (2 * r) ** k * val + ball


# -- points ---------------------------------------------------------------------------

def normalize_point(K: Complex2, key) -> tuple:
    """Reduce a point key to the lowest-dimensional cell that carries it."""
    kind = key[0]
    if kind == "v":
        return ("v", int(key[1]))
    if kind == "e":
        e, t = int(key[1]), float(key[2])
        if t == 0.0:
            return ("v", K.edges[e][0])
        if t == 1.0:
            return ("v", K.edges[e][1])
        if not 0.0 < t < 1.0:
            raise ValueError(f"edge parameter {t} outside [0, 1]")
        return ("e", e, t)
    if kind == "f":
        f = int(key[1])
        b = [float(x) for x in key[2:5]]
        if min(b) < 0 or abs(sum(b) - 1.0) > 1e-12:
            raise ValueError("barycentric coordinates must be non-negative and sum to 1")
        vs = K.face_vertices(f)
        nz = [j for j in range(3) if b[j] != 0.0]
        if len(nz) == 1:
            return ("v", vs[nz[0]])
        if len(nz) == 2:
            j0, j1 = nz
            e, s = K.edge_index()[(vs[j0], vs[j1])]
            return normalize_point(K, ("e", e, b[j1] if s > 0 else b[j0]))
        return ("f", f, *b)
    raise ValueError(f"bad point key {key!r}")


def carrier(K: Complex2, key) -> frozenset:
    if key[0] == "v":
        return frozenset([key[1]])
    if key[0] == "e":
        return frozenset(K.edges[key[1]])
    return frozenset(K.face_vertices(key[1]))


def point_bary(K: Complex2, f: int, key) -> np.ndarray:
    vs = K.face_vertices(f)
    b = np.zeros(3)
    if key[0] == "v":
        b[vs.index(key[1])] = 1.0
    elif key[0] == "e":
        t, h = K.edges[key[1]]
        b[vs.index(t)] = 1.0 - key[2]
        b[vs.index(h)] = key[2]
    else:
        if key[1] != f:
            raise ValueError("interior point of another face")
        b[:] = key[2:5]
    return b


def local_xy(K: Complex2, f: int, key) -> np.ndarray:
    return to_plane(point_bary(K, f, key))


# -- chains -----------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    p: tuple
    q: tuple
    mult: int = 1


@dataclass
class PLChain:
    """Integer 1-chain of straight segments between point keys."""

    pieces: list = field(default_factory=list)
    k: int = 1

    def boundary(self) -> Counter:
        out: Counter = Counter()
        for s in self.pieces:
            out[s.q] += s.mult
            out[s.p] -= s.mult
        return Counter({key: m for key, m in out.items() if m})

    def volume(self, K: Complex2) -> float:
        return sum(abs(s.mult) * segment_length(K, s) for s in self.pieces)

    def to_json(self) -> str:
        doc = {"k": self.k, "pieces": [{"p": list(s.p), "q": list(s.q), "m": s.mult} for s in self.pieces]}
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str, K: Optional[Complex2] = None) -> "PLChain":
        doc = json.loads(text)
        pieces = []
        for item in doc["pieces"]:
            p, q = tuple(item["p"]), tuple(item["q"])
            if K is not None:
                p, q = normalize_point(K, p), normalize_point(K, q)
            pieces.append(Segment(p, q, int(item.get("m", 1))))
        return cls(pieces, int(doc.get("k", 1)))


def ambient(K: Complex2, s: Segment) -> tuple:
    """``("edge", e)`` if the segment lies in an edge, else ``("face", f)``."""
    vs = carrier(K, s.p) | carrier(K, s.q)
    if len(vs) == 1:
        (v,) = vs
        for e, (t, h) in enumerate(K.edges):
            if v in (t, h):
                return ("edge", e)
        raise ValueError("isolated vertex")
    if len(vs) == 2:
        a, b = sorted(vs)
        try:
            return ("edge", K.edge_index()[(a, b)][0])
        except KeyError:
            raise ValueError(f"segment endpoints {sorted(vs)} span no edge") from None
    f = K.face_index().get(vs) if len(vs) == 3 else None
    if f is None:
        for key in (s.p, s.q):
            if key[0] == "f":
                f = key[1]
        if f is None or not vs <= set(K.face_vertices(f)):
            raise ValueError(f"segment {s} does not lie in a closed 2-simplex")
    return ("face", f)


def _any_face(K: Complex2, e: int) -> int:
    for f, cyc in enumerate(K.faces):
        if any(x == e for x, _ in cyc):
            return f
    raise ValueError(f"edge {e} bounds no face")


def segment_length(K: Complex2, s: Segment) -> float:
    kind, c = ambient(K, s)
    f = c if kind == "face" else _any_face(K, c)
    return float(np.linalg.norm(local_xy(K, f, s.q) - local_xy(K, f, s.p)))


def chain_from_points(points: Sequence, closed: bool = True) -> PLChain:
    pts = list(points)
    if closed:
        pts = pts + [pts[0]]
    return PLChain([Segment(pts[j], pts[j + 1]) for j in range(len(pts) - 1) if pts[j] != pts[j + 1]])


# -- radial projection from u ---------------------------------------------------------------

def _angle(v) -> float:
    return math.atan2(v[1], v[0])


def _signed_angle(a, b) -> float:
    return math.atan2(a[0] * b[1] - a[1] * b[0], a[0] * b[0] + a[1] * b[1])


def projected_lengths(segs: np.ndarray, us: np.ndarray, radius: float) -> tuple:
    """Length of ``pi_u`` of each chain for many centres, and distances to ``Q``.

    ``segs`` has shape ``(m, 2, 2)``; returns ``(lengths (n,), min_dist (n,))``.
    """
    segs = np.asarray(segs, float).reshape(-1, 2, 2)
    us = np.asarray(us, float).reshape(-1, 2)
    if len(segs) == 0:
        return np.zeros(len(us)), np.full(len(us), np.inf)
    a = segs[None, :, 0, :]
    d = segs[None, :, 1, :] - a
    f = a - us[:, None, :]
    A = np.einsum("nmi,nmi->nm", d, d)
    B = 2 * np.einsum("nmi,nmi->nm", f, d)
    C = np.einsum("nmi,nmi->nm", f, f) - radius**2
    L = np.sqrt(A)
    disc = B * B - 4 * A * C
    root = np.sqrt(np.maximum(disc, 0))
    lo = np.clip((-B - root) / (2 * A), 0, 1)
    hi = np.clip((-B + root) / (2 * A), 0, 1)
    inside = (disc > 0) & (hi > lo)
    frac = np.where(inside, hi - lo, 0.0)
    X = f + lo[..., None] * d
    Y = f + hi[..., None] * d
    cross = X[..., 0] * Y[..., 1] - X[..., 1] * Y[..., 0]
    dot = np.einsum("nmi,nmi->nm", X, Y)
    arc = np.where(inside, radius * np.abs(np.arctan2(cross, dot)), 0.0)
    lengths = (L * (1 - frac) + arc).sum(axis=1)
    tproj = np.clip(-np.einsum("nmi,nmi->nm", f, d) / A, 0, 1)
    dist = np.linalg.norm(f + tproj[..., None] * d, axis=-1).min(axis=1)
    return lengths, dist


@dataclass(frozen=True)
class LocalSegment:
    a: tuple
    b: tuple
    mult: int = 1

    @property
    def length(self) -> float:
        return math.dist(self.a, self.b)


@dataclass(frozen=True)
class Arc:
    center: tuple
    radius: float
    phi0: float
    phi1: float  # signed sweep phi1 - phi0
    mult: int = 1

    @property
    def length(self) -> float:
        return self.radius * abs(self.phi1 - self.phi0)

    def point(self, phi) -> np.ndarray:
        return np.asarray(self.center) + self.radius * np.array([math.cos(phi), math.sin(phi)])


def _split_at_circle(a, b, u, radius) -> list:
    """Pieces ``(inside?, A, B)`` of the segment ``a -> b`` cut by the circle."""
    a, b, u = (np.asarray(x, float) for x in (a, b, u))
    d = b - a
    f = a - u
    A = d @ d
    B = 2 * f @ d
    C = f @ f - radius**2
    disc = B * B - 4 * A * C
    if disc <= 0:
        return [(False, a, b)]
    root = math.sqrt(disc)
    lo, hi = max(0.0, (-B - root) / (2 * A)), min(1.0, (-B + root) / (2 * A))
    if hi <= lo:
        return [(False, a, b)]
    out = []
    if lo > 0:
        out.append((False, a, a + lo * d))
    out.append((True, a + lo * d if lo > 0 else a, a + hi * d if hi < 1 else b))
    if hi < 1:
        out.append((False, a + hi * d, b))
    return out


def _pi_u(x, u, radius) -> np.ndarray:
    x, u = np.asarray(x, float), np.asarray(u, float)
    v = x - u
    n = np.linalg.norm(v)
    return x if n >= radius else u + radius * v / n


def radial_project(segments: Sequence[LocalSegment], u, radius: float) -> list:
    """``pi_u`` of local segments: unchanged outside the circle, arcs inside."""
    out = []
    for s in segments:
        for inside, A, B in _split_at_circle(s.a, s.b, u, radius):
            if not inside:
                if np.linalg.norm(B - A) > 0:
                    out.append(LocalSegment(tuple(A), tuple(B), s.mult))
                continue
            X, Y = A - np.asarray(u), B - np.asarray(u)
            if min(np.linalg.norm(X), np.linalg.norm(Y)) == 0:
                raise ValueError("centre lies on the chain")
            phi0 = _angle(X)
            out.append(Arc(tuple(u), radius, phi0, phi0 + _signed_angle(X, Y), s.mult))
    return out


# -- centre selection and the measure of bad centres ---------------------------------------------

def sample_ball(rng: np.random.Generator, n: int, r: float) -> np.ndarray:
    rho = r * np.sqrt(rng.random(n))
    th = 2 * math.pi * rng.random(n)
    return _O + np.stack([rho * np.cos(th), rho * np.sin(th)], axis=1)


def _seg_array(segments: Sequence[LocalSegment]) -> np.ndarray:
    return np.array([[s.a, s.b] for s in segments], float).reshape(-1, 2, 2)


def choose_center(segments: Sequence[LocalSegment], constants: PushingConstants, rng,
                  max_draws: int = 100_000, batch: int = 64) -> tuple:
    """Draw ``u`` uniformly from ``B(O, r)`` until ``vol(pi_u Q) <= v0 vol(Q)``.

    Returns ``(u, rejected)``.  Centres within ``1e-9`` of ``Q`` are also
    rejected (a measure-zero event for generic chains).
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    segs = _seg_array(segments)
    vol = float(np.linalg.norm(segs[:, 1] - segs[:, 0], axis=1).sum()) if len(segs) else 0.0
    if vol == 0.0:
        return _O.copy(), 0
    rejected = 0
    while rejected < max_draws:
        us = sample_ball(rng, batch, constants.r)
        lengths, dist = projected_lengths(segs, us, 2 * constants.r)
        ok = (lengths <= constants.v0 * vol) & (dist > TOL)
        if ok.any():
            j = int(np.argmax(ok))
            return us[j], rejected + j
        rejected += batch
    raise RuntimeError("rejection budget exhausted: the volume computation is suspect")


@dataclass(frozen=True)
class AlphaEstimate:
    v: float
    alpha: float
    ci_low: float
    ci_high: float
    hits: int
    samples: int


def estimate_alpha(segments: Sequence[LocalSegment], v: float, samples: int, seed,
                   r: float = DEFAULT_R, confidence: float = 0.95) -> AlphaEstimate:
    """Monte-Carlo measure of ``A_v = {u in B(O,r) : vol(pi_u Q) > v vol(Q)}``.

    The interval is the exact (Clopper-Pearson) binomial interval scaled by
    the area of the ball.
    """
    if samples < 100:
        raise ValueError("use at least 100 samples")
    segs = _seg_array(segments)
    area = math.pi * r * r
    vol = float(np.linalg.norm(segs[:, 1] - segs[:, 0], axis=1).sum()) if len(segs) else 0.0
    if vol == 0.0:
        ci = stats.binomtest(0, samples).proportion_ci(confidence, method="exact")
        return AlphaEstimate(v, 0.0, 0.0, ci.high * area, 0, samples)
    rng = np.random.default_rng(seed)
    lengths, _ = projected_lengths(segs, sample_ball(rng, samples, r), 2 * r)
    hits = int((lengths > v * vol).sum())
    ci = stats.binomtest(hits, samples).proportion_ci(confidence, method="exact")
    return AlphaEstimate(v, hits / samples * area, ci.low * area, ci.high * area, hits, samples)


def alpha_point_segment(v: float, r: float = DEFAULT_R) -> float:
    """Exact ``alpha(v)`` for a vanishing segment centred at ``O``, ``v >= 2``.

    A segment element at distance ``rho`` from ``u`` at angle ``beta`` is
    stretched by ``2r |sin beta| / rho``; the set where this exceeds ``v``
    is two discs of diameter ``2r / v`` touching at ``O``.
    """
    if v < 2:
        raise ValueError("closed form needs v >= 2 so both discs fit in B(O, r)")
    return 0.5 * math.pi * (2 * r / v) ** 2


# -- boundary of the simplex as a perimeter coordinate ----------------------------------------------

_CORNER_ANGLES = [_angle(_V[k] - _O) for k in range(3)]
_A0 = _CORNER_ANGLES[0]
_CORNERS = [_A0 + ((a - _A0) % (2 * math.pi)) for a in _CORNER_ANGLES] + [_A0 + 2 * math.pi]


def _s_of_angle(theta: float) -> float:
    """Unwrapped perimeter coordinate: ``s in [k, k+1]`` on the edge ``V_k -> V_k+1``."""
    n = math.floor((theta - _A0) / (2 * math.pi))
    th = theta - 2 * math.pi * n
    k = 0
    while k < 2 and th >= _CORNERS[k + 1]:
        k += 1
    a, b = _V[k], _V[(k + 1) % 3]
    d = np.array([math.cos(th), math.sin(th)])
    E = b - a
    M = np.array([[d[0], -E[0]], [d[1], -E[1]]])
    lam, t = np.linalg.solve(M, a - _O)
    return 3 * n + k + min(max(float(t), 0.0), 1.0)


def _point_of_s(s: float) -> np.ndarray:
    k = math.floor(s)
    t = s - k
    k %= 3
    return _V[k] + t * (_V[(k + 1) % 3] - _V[k])


@dataclass
class _Sigma:
    """Lookup data for one 2-simplex of the complex."""

    K: Complex2
    f: int

    def __post_init__(self):
        self.vs = self.K.face_vertices(self.f)
        idx = self.K.edge_index()
        self.side = [idx[(self.vs[k], self.vs[(k + 1) % 3])] for k in range(3)]

    def key_of_s(self, s: float) -> tuple:
        k = math.floor(s)
        t = s - k
        k %= 3
        if t == 0.0:
            return ("v", self.vs[k])
        e, sign = self.side[k]
        return ("e", e, t if sign > 0 else 1.0 - t)

    def s_of_key(self, key) -> Optional[float]:
        """Perimeter coordinate in ``[0, 3)`` of a boundary point, else ``None``."""
        if key[0] == "v":
            return float(self.vs.index(key[1])) if key[1] in self.vs else None
        if key[0] == "e":
            for k, (e, sign) in enumerate(self.side):
                if e == key[1]:
                    return k + (key[2] if sign > 0 else 1.0 - key[2])
        return None


def _nearest_rep(s_mod: float, target: float) -> float:
    return s_mod + 3 * round((target - s_mod) / 3)


# -- Green's theorem and line integrals ---------------------------------------------------------------

def _path_area(path: list) -> float:
    """Signed area enclosed by a closed path of ``("seg", A, B)`` / ``("arc", c, rho, p0, p1)``."""
    total = 0.0
    for item in path:
        if item[0] == "seg":
            (x0, y0), (x1, y1) = item[1], item[2]
            total += 0.5 * (x0 * y1 - x1 * y0)
        else:
            (cx, cy), rho, p0, p1 = item[1:]
            total += 0.5 * (rho * rho * (p1 - p0) + cx * rho * (math.sin(p1) - math.sin(p0))
                            - cy * rho * (math.cos(p1) - math.cos(p0)))
    return total


_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)


def line_integral(path: list, form) -> float:
    """Integrate ``P dx + Q dy`` (``form(x, y) -> (P, Q)``) along path pieces."""
    total = 0.0
    t = 0.5 * (_GL_X + 1)
    w = 0.5 * _GL_W
    for item in path:
        if item[0] == "seg":
            A, B = np.asarray(item[1]), np.asarray(item[2])
            pts = A + t[:, None] * (B - A)
            P, Q = form(pts[:, 0], pts[:, 1])
            total += float(w @ (P * (B - A)[0] + Q * (B - A)[1]))
        else:
            c, rho, p0, p1 = np.asarray(item[1]), item[2], item[3], item[4]
            ph = p0 + t * (p1 - p0)
            x, y = c[0] + rho * np.cos(ph), c[1] + rho * np.sin(ph)
            P, Q = form(x, y)
            total += float(w @ ((-P * rho * np.sin(ph) + Q * rho * np.cos(ph)) * (p1 - p0)))
    return total


def random_polynomial_form(rng, degree: int = 2):
    cP = rng.normal(size=(degree + 1, degree + 1))
    cQ = rng.normal(size=(degree + 1, degree + 1))

    def form(x, y):
        P = sum(cP[i, j] * x**i * y**j for i in range(degree + 1) for j in range(degree + 1 - i))
        Q = sum(cQ[i, j] * x**i * y**j for i in range(degree + 1) for j in range(degree + 1 - i))
        return P, Q

    return form


def _perimeter_path(s0: float, s1: float) -> list:
    """Straight pieces along the simplex boundary from ``s0`` to ``s1``."""
    if s0 == s1:
        return []
    step = 1 if s1 > s0 else -1
    cuts = [s0]
    k = math.floor(s0) + 1 if step > 0 else math.ceil(s0) - 1
    while (k < s1) if step > 0 else (k > s1):
        cuts.append(float(k))
        k += step
    cuts.append(s1)
    return [("seg", tuple(_point_of_s(a)), tuple(_point_of_s(b))) for a, b in zip(cuts, cuts[1:])]


# -- pushing -------------------------------------------------------------------------------------------

@dataclass
class SimplexRecord:
    simplex: int
    center: list
    rejected: int
    vol_Q: float
    vol_piQ: float
    vol_R: float
    vol_S: float
    stretch_ok: bool
    dS_error: float


@dataclass
class PushCertificate:
    constants: dict
    records: list
    vol_T: float
    vol_R: float
    vol_S: float
    effective_C: float
    boundary_ok: bool
    skeleton_ok: bool
    homotopy_ok: bool
    bounds_ok: bool

    @property
    def ok(self) -> bool:
        return self.boundary_ok and self.skeleton_ok and self.homotopy_ok and self.bounds_ok and all(
            rec.stretch_ok for rec in self.records)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d

    def table(self) -> str:
        lines = [f"{'simplex':>7} {'rejected':>8} {'vol Q':>10} {'vol piQ':>10} {'vol R':>10} {'vol S':>10}"]
        for rec in self.records:
            lines.append(f"{rec.simplex:>7} {rec.rejected:>8} {rec.vol_Q:>10.6f} {rec.vol_piQ:>10.6f} "
                         f"{rec.vol_R:>10.6f} {rec.vol_S:>10.6f}")
        lines.append(f"vol T = {self.vol_T:.6f}  vol R = {self.vol_R:.6f}  vol S = {self.vol_S:.6f}")
        lines.append(f"C = {self.constants['C']:.6f}  observed max(vol R, vol S) / vol T = {self.effective_C:.6f}")
        lines.append("certificate " + ("valid" if self.ok else "INVALID"))
        return "\n".join(lines)


@dataclass
class SweptCell:
    """A 2-chain piece: the region enclosed by ``path`` counted ``mult`` times."""

    simplex: int
    path: list
    mult: int

    @property
    def area(self) -> float:
        return abs(_path_area(self.path))


def _push_simplex(sig: _Sigma, items: list, u, radius: float) -> tuple:
    """Push the pieces ``(index, Segment, a, b)`` of one simplex; returns R pieces and cells."""
    point_s: dict = {}
    point_key: dict = {}
    for _, seg, a, b in items:
        for key, xy in ((seg.p, a), (seg.q, b)):
            if key in point_s:
                continue
            s = sig.s_of_key(key)
            if s is None:
                s = _s_of_angle(_angle(_pi_u(xy, u, radius) - _O)) % 3
                point_key[key] = sig.key_of_s(s)
            else:
                point_key[key] = key
            point_s[key] = s
    r_out: dict = {}
    cells: list = []
    for idx, seg, a, b in items:
        parts = _split_at_circle(a, b, u, radius)
        images = []  # (path item of pi_u, start point, end point, delta angle about O)
        for inside, A, B in parts:
            if inside:
                X, Y = A - u, B - u
                phi0 = _angle(X)
                dphi = _signed_angle(X, Y)
                PA, PB = _pi_u(A, u, radius), _pi_u(B, u, radius)
                arc = ("arc", tuple(u), radius, phi0, phi0 + dphi)
                psi = (_angle(PB - _O) - _angle(PA - _O)) % (2 * math.pi)
                dpsi = psi if dphi > 0 else (psi - 2 * math.pi if psi else 0.0) if dphi < 0 else 0.0
                images.append((arc, PA, PB, dpsi))
                # H_u sweeps the region between the chord and the arc
                cells.append(SweptCell(sig.f, [("seg", tuple(A), tuple(B)), ("seg", tuple(B), tuple(PB)),
                                               ("arc", tuple(u), radius, phi0 + dphi, phi0),
                                               ("seg", tuple(PA), tuple(A))], seg.mult))
            else:
                images.append((("seg", tuple(A), tuple(B)), A, B, _signed_angle(A - _O, B - _O)))
        theta0 = _angle(images[0][1] - _O)
        theta0 = _A0 + ((theta0 - _A0) % (2 * math.pi))
        s_start = point_s[seg.p]
        cum = 0.0
        s_marks = [s_start]
        for j, im in enumerate(images):
            cum += im[3]
            if j < len(images) - 1:
                s_marks.append(_s_of_angle(theta0 + cum) - _s_of_angle(theta0) + s_start)
        s_end = _nearest_rep(point_s[seg.q], _s_of_angle(theta0 + cum) - _s_of_angle(theta0) + s_start)
        s_marks.append(s_end)
        # H_O sweeps each image piece out to the boundary
        for j, (item, P0, P1, _) in enumerate(images):
            path = [item, ("seg", tuple(P1), tuple(_point_of_s(s_marks[j + 1])))]
            path += _reverse_path(_perimeter_path(s_marks[j], s_marks[j + 1]))
            path.append(("seg", tuple(_point_of_s(s_marks[j])), tuple(P0)))
            cells.append(SweptCell(sig.f, path, seg.mult))
        r_out[idx] = _r_pieces(sig, s_start, s_end, point_key[seg.p], point_key[seg.q], seg.mult)
    return r_out, cells


def _reverse_path(path: list) -> list:
    out = []
    for item in reversed(path):
        if item[0] == "seg":
            out.append(("seg", item[2], item[1]))
        else:
            out.append(("arc", item[1], item[2], item[4], item[3]))
    return out


def _r_pieces(sig: _Sigma, s0: float, s1: float, k0, k1, mult: int) -> list:
    if s0 == s1:
        return []
    step = 1 if s1 > s0 else -1
    cuts = [s0]
    k = math.floor(s0) + 1 if step > 0 else math.ceil(s0) - 1
    while (k < s1) if step > 0 else (k > s1):
        cuts.append(float(k))
        k += step
    cuts.append(s1)
    keys = [k0] + [sig.key_of_s(c) for c in cuts[1:-1]] + [k1]
    return [(Segment(keys[j], keys[j + 1], mult), cuts[j], cuts[j + 1]) for j in range(len(cuts) - 1)]


@dataclass
class PushResult:
    R: PLChain
    S: list  # SweptCell
    certificate: PushCertificate


def push_chain(T: PLChain, K: Complex2, constants: Optional[PushingConstants] = None,
               seed: int = 0, checks: int = 3) -> PushResult:
    """Push a 1-chain with boundary in the vertices into the 1-skeleton.

    Pieces already in the 1-skeleton are kept; the others are pushed simplex
    by simplex with a centre drawn from ``SeedSequence([seed, simplex])``.
    ``R`` lists the pushed pieces in the order of ``T``.  All certificate
    checks are run before returning.
    """
    constants = constants or pushing_constants(1, 2)
    if (constants.k, constants.i) != (1, 2):
        raise ValueError("geometric pushing is implemented for 1-chains in 2-complexes")
    if not K.simplicial:
        raise ValueError("pushing needs a simplicial complex")
    for key, m in T.boundary().items():
        if key[0] != "v":
            raise ValueError(f"boundary point {key} is not a vertex")
    radius = 2 * constants.r
    per_simplex: dict = {}
    placed: list = []
    for idx, seg in enumerate(T.pieces):
        kind, c = ambient(K, seg)
        if kind == "edge":
            placed.append(("edge", c))
            continue
        a, b = local_xy(K, c, seg.p), local_xy(K, c, seg.q)
        per_simplex.setdefault(c, []).append((idx, seg, a, b))
        placed.append(("face", c))
    r_by_piece: dict = {}
    cells: list = []
    records: list = []
    homotopy_ok = True
    form_rng = np.random.default_rng(np.random.SeedSequence([seed, 2**31 - 1]))
    forms = [random_polynomial_form(form_rng) for _ in range(checks)]
    for f in sorted(per_simplex):
        items = per_simplex[f]
        sig = _Sigma(K, f)
        local = [LocalSegment(tuple(a), tuple(b), seg.mult) for _, seg, a, b in items]
        rng = np.random.default_rng(np.random.SeedSequence([seed, f]))
        u, rejected = choose_center(local, constants, rng)
        vol_Q = sum(abs(s.mult) * s.length for s in local)
        vol_pi = sum(abs(p.mult) * p.length for p in radial_project(local, u, radius))
        r_out, sc = _push_simplex(sig, items, u, radius)
        r_by_piece.update(r_out)
        cells += sc
        vol_R = sum(abs(s.mult) * SIDE * abs(s1 - s0) for pcs in r_out.values() for s, s0, s1 in pcs)
        vol_S = sum(abs(c.mult) * c.area for c in sc)
        # dS = Q - R, tested against random polynomial 1-forms
        err = 0.0
        for form in forms:
            lhs = sum(c.mult * line_integral(c.path, form) for c in sc)
            rhs = sum(s.mult * line_integral([("seg", tuple(s.a), tuple(s.b))], form) for s in local)
            rhs -= sum(s.mult * line_integral(_perimeter_path(s0, s1), form)
                       for pcs in r_out.values() for s, s0, s1 in pcs)
            err = max(err, abs(lhs - rhs))
        homotopy_ok = homotopy_ok and bool(err <= TOL)
        records.append(SimplexRecord(f, [float(x) for x in u], int(rejected), float(vol_Q), float(vol_pi),
                                     float(vol_R), float(vol_S),
                                     bool(vol_pi <= constants.v0 * vol_Q + TOL), float(err)))
    pieces = []
    for idx, seg in enumerate(T.pieces):
        if placed[idx][0] == "edge":
            pieces.append(seg)
        else:
            pieces += [s for s, _, _ in r_by_piece[idx]]
    R = PLChain(pieces)
    vol_T = T.volume(K)
    vol_R = R.volume(K)
    vol_S = sum(abs(c.mult) * c.area for c in cells)
    boundary_ok = bool(R.boundary() == T.boundary())
    skeleton_ok = all(_on_skeleton(K, s) for s in R.pieces)
    C = constants.C
    bounds_ok = bool(vol_R <= C * vol_T + TOL and vol_S <= C * vol_T + TOL)
    eff = float(max(vol_R, vol_S) / vol_T) if vol_T > 0 else 0.0
    cert = PushCertificate(constants.to_dict(), records, float(vol_T), float(vol_R), float(vol_S), eff,
                           boundary_ok, skeleton_ok, homotopy_ok, bounds_ok)
    return PushResult(R, cells, cert)


def _on_skeleton(K: Complex2, s: Segment) -> bool:
    try:
        kind, e = ambient(K, s)
    except ValueError:
        return False
    if kind != "edge":
        return False
    f = _any_face(K, e)
    vs = K.face_vertices(f)
    t, h = K.edges[e]
    A, B = _V[vs.index(t)], _V[vs.index(h)]
    for key in (s.p, s.q):
        x = local_xy(K, f, key)
        d = B - A
        w = x - A
        dist = abs(d[0] * w[1] - d[1] * w[0]) / np.linalg.norm(d)
        if dist > TOL:
            return False
    return True


# -- random chains --------------------------------------------------------------------------------------

def random_loop(K: Complex2, seed, steps: int = 6) -> PLChain:
    """Random closed PL loop through interior, edge and vertex points, based at a vertex."""
    rng = np.random.default_rng(seed)
    faces_at: dict = {}
    for f in range(len(K.faces)):
        for v in K.face_vertices(f):
            faces_at.setdefault(v, []).append(f)
    start = ("v", int(rng.integers(K.n_vertices)))
    pts = [start]
    cur = start
    for _ in range(steps):
        cand = [f for f in range(len(K.faces)) if carrier(K, cur) <= set(K.face_vertices(f))]
        f = int(rng.choice(cand))
        kind = rng.random()
        if kind < 0.6:
            b = rng.dirichlet(np.ones(3))
            nxt = ("f", f, *[float(x) for x in b])
        elif kind < 0.9:
            j = int(rng.integers(3))
            b = [0.0, 0.0, 0.0]
            t = float(rng.uniform(0.05, 0.95))
            b[j], b[(j + 1) % 3] = 1.0 - t, t
            nxt = normalize_point(K, ("f", f, *b))
        else:
            nxt = ("v", int(rng.choice(K.face_vertices(f))))
        if nxt != cur:
            pts.append(nxt)
            cur = nxt
    # close up: step to a vertex of the current cell, then walk the 1-skeleton home
    if cur[0] != "v":
        v = int(rng.choice(sorted(carrier(K, cur))))
        pts.append(("v", v))
        cur = ("v", v)
    pts += [("v", v) for v in _vertex_path(K, cur[1], start[1])[1:]]
    return chain_from_points(pts[:-1] if pts[-1] == start and len(pts) > 1 else pts, closed=True)


def _vertex_path(K: Complex2, a: int, b: int) -> list:
    adj = K.neighbours()
    prev = {a: None}
    queue = [a]
    for x in queue:
        if x == b:
            break
        for y in sorted(adj[x]):
            if y not in prev:
                prev[y] = x
                queue.append(y)
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]
