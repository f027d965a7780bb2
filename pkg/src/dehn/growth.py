"""Growth functions under the preorder ``f(n) <= A g(Bn + C) + Dn + E``.

Two views are supported.  A small symbolic family (zero, ``c n^d`` and
``b^n``) where domination is decidable exactly, and finite tables, where a
witness is searched on a geometric grid of constants.  A table witness only
proves the inequality on the sampled range; failing to find one proves
nothing.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np


# -- symbolic family ------------------------------------------------------------

@dataclass(frozen=True)
class Zero:
    def __call__(self, n) -> Fraction:
        return Fraction(0)

    def __str__(self):
        return "0"


@dataclass(frozen=True)
class Polynomial:
    coefficient: Fraction
    degree: int

    def __post_init__(self):
        object.__setattr__(self, "coefficient", Fraction(self.coefficient))
        if self.coefficient <= 0:
            raise ValueError("polynomial coefficient must be positive")
        if self.degree < 0:
            raise ValueError("polynomial degree must be non-negative")

    def __call__(self, n) -> Fraction:
        return self.coefficient * Fraction(n) ** self.degree  # 0**0 == 1

    def __str__(self):
        return f"{self.coefficient}*n^{self.degree}"


@dataclass(frozen=True)
class Exponential:
    base: Fraction

    def __post_init__(self):
        object.__setattr__(self, "base", Fraction(self.base))
        if self.base <= 1:
            raise ValueError("exponential base must exceed 1")

    def __call__(self, n) -> Fraction:
        return self.base ** int(n)

    def __str__(self):
        return f"{self.base}^n"


SymbolicGrowth = Union[Zero, Polynomial, Exponential]


@dataclass(frozen=True)
class WitnessConstants:
    A: Fraction
    B: Fraction
    C: Fraction
    D: Fraction
    E: Fraction
    domain: Optional[tuple] = None  # (lo, hi) for table witnesses, None = all n
    clamped: bool = False

    def as_tuple(self) -> tuple:
        return (self.A, self.B, self.C, self.D, self.E)

    def holds_at(self, f, g, n) -> bool:
        return f(n) <= self.A * g(self.B * n + self.C) + self.D * n + self.E

    def __str__(self):
        s = "A={} B={} C={} D={} E={}".format(*self.as_tuple())
        if self.domain:
            s += f" on n={self.domain[0]}..{self.domain[1]}"
        return s + (" (clamped)" if self.clamped else "")


def _witness(A=1, B=1, C=0, D=0, E=0) -> WitnessConstants:
    return WitnessConstants(*(Fraction(x) for x in (A, B, C, D, E)))


@dataclass(frozen=True)
class DominanceResult:
    holds: bool
    witness: Optional[WitnessConstants] = None
    reason: str = ""

    def __bool__(self):
        return self.holds


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def _poly_over_exp_sup(c: Fraction, d: int, b: Fraction) -> Fraction:
    # c n^d / b^n increases until n ~ d / ln b, then decreases
    stop = int(2 * d / math.log(float(b))) + 4
    return max(c * Fraction(n) ** d / b**n for n in range(stop + 1))


def dominates_symbolic(f: SymbolicGrowth, g: SymbolicGrowth) -> DominanceResult:
    """Decide ``f < g`` exactly on the symbolic family, with a witness."""
    E0 = max(Fraction(1), f(0))
    if isinstance(f, Zero):
        return DominanceResult(True, _witness(1, 1, 0, 0, 0), "zero is dominated by everything")
    if isinstance(f, Polynomial) and f.degree <= 1:
        if isinstance(g, Polynomial) and f.degree <= g.degree:
            return DominanceResult(True, _witness(f.coefficient / g.coefficient, 1, 0, 0, E0),
                                   "degree comparison")
        return DominanceResult(True, _witness(1, 1, 0, f.coefficient if f.degree == 1 else 0, E0),
                               "at most linear: absorbed by Dn + E")
    if isinstance(f, Polynomial):
        if isinstance(g, Polynomial):
            if f.degree <= g.degree:
                return DominanceResult(True, _witness(f.coefficient / g.coefficient, 1, 0, 0, E0),
                                       "degree comparison")
            return DominanceResult(False, reason=f"degree {f.degree} > {g.degree} > 1"
                                   if g.degree > 1 else f"degree {f.degree} > 1 >= {g.degree}")
        if isinstance(g, Exponential):
            A = _ceil(_poly_over_exp_sup(f.coefficient, f.degree, g.base))
            return DominanceResult(True, _witness(max(A, 1), 1, 0, 0, E0),
                                   "exponentials dominate polynomials")
        return DominanceResult(False, reason="superlinear growth is not dominated by zero")
    # f exponential
    if isinstance(g, Exponential):
        B = 1
        while g.base**B < f.base:
            B += 1
        return DominanceResult(True, _witness(1, B, 0, 0, E0), f"base change with B={B}")
    return DominanceResult(False, reason="exponential growth beats every polynomial")


def equivalent_symbolic(f: SymbolicGrowth, g: SymbolicGrowth) -> bool:
    return bool(dominates_symbolic(f, g)) and bool(dominates_symbolic(g, f))


# -- tables -----------------------------------------------------------------------

@dataclass
class GrowthTable:
    samples: dict
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.samples:
            raise ValueError("empty growth table")
        keys = sorted(self.samples)
        if keys[0] not in (0, 1) or keys != list(range(keys[0], keys[-1] + 1)):
            raise ValueError("table domain must be a contiguous range starting at 0 or 1")
        self.samples = {int(k): Fraction(self.samples[k]) for k in keys}

    @property
    def domain(self) -> tuple:
        keys = list(self.samples)
        return keys[0], keys[-1]

    def __getitem__(self, n):
        return self.samples[n]

    def __len__(self):
        return len(self.samples)

    def values(self) -> np.ndarray:
        return np.array([float(v) for v in self.samples.values()])

    @classmethod
    def from_function(cls, fn, lo: int, hi: int) -> "GrowthTable":
        return cls({n: fn(n) for n in range(lo, hi + 1)})

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "value"])
        for n, v in self.samples.items():
            w.writerow([n, v])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "GrowthTable":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != ["n", "value"]:
            raise ValueError("growth CSV must start with header 'n,value'")
        samples = {}
        for row in rows[1:]:
            if not row:
                continue
            if len(row) != 2:
                raise ValueError(f"bad CSV row {row!r}")
            samples[int(row[0])] = Fraction(row[1].strip())
        return cls(samples)


def constant_grid(max_exp: int = 10, include_zero: bool = True) -> list[int]:
    grid = [2**k for k in range(max_exp + 1)]
    return ([0] + grid) if include_zero else grid


def _exact_ok(f: GrowthTable, g: GrowthTable, A, B, C, D, E, allow_clamp) -> tuple:
    hi = g.domain[1]
    clamped = False
    for n, fv in f.samples.items():
        m = B * n + C
        if m > hi:
            clamped = True
            if not allow_clamp:
                return False, True
            m = hi
        if fv > A * g.samples[m] + D * n + E:
            return False, clamped
    return True, clamped


def find_witness(
    f: GrowthTable,
    g: GrowthTable,
    max_exp: int = 10,
    allow_clamp: bool = False,
) -> Optional[WitnessConstants]:
    """Search the grid for constants certifying ``f < g`` on the sampled range.

    A and B range over ``1, 2, 4, ..`` and C, D, E over ``0, 1, 2, 4, ..`` up to
    ``2**max_exp``; candidates are taken in lexicographic order of
    ``(A, B, C, E, D)`` and the first hit has D then E shrunk to the least
    integers that still work.  ``g(Bn + C)`` beyond the table is clamped to the
    last sample; such witnesses are flagged and only accepted when
    ``allow_clamp`` is set.
    """
    if len(f) < 2 or len(g) < 2:
        raise ValueError("tables need at least two samples")
    if f.domain != g.domain:
        raise ValueError(f"mismatched domains {f.domain} vs {g.domain}")
    lo, hi = f.domain
    ns = np.arange(lo, hi + 1, dtype=float)
    fv = f.values()
    gv = np.zeros(hi + 1)
    gv[lo:] = g.values()
    pos = constant_grid(max_exp, include_zero=False)
    nonneg = np.array(constant_grid(max_exp), dtype=float)
    has_zero = lo == 0
    for A, B, C in itertools.product(pos, pos, nonneg.astype(int)):
        idx = B * ns.astype(int) + C
        clamped = bool((idx > hi).any())
        if clamped and not allow_clamp:
            continue
        r = fv - A * gv[np.minimum(idx, hi)]
        for E in nonneg:
            if has_zero and r[0] > E + 1e-9 * max(1.0, abs(E)):
                continue
            pos_n = ns > 0
            need = np.max((r[pos_n] - E) / ns[pos_n]) if pos_n.any() else 0.0
            cands = nonneg[nonneg >= need - 1e-9 * max(1.0, abs(need))]
            if not len(cands):
                continue
            D = int(cands[0])
            E = int(E)
            ok, cl = _exact_ok(f, g, A, B, C, D, E, allow_clamp)
            if not ok:
                continue
            D = _shrink(lambda d: _exact_ok(f, g, A, B, C, d, E, allow_clamp)[0], D)
            E = _shrink(lambda e: _exact_ok(f, g, A, B, C, D, e, allow_clamp)[0], E)
            return WitnessConstants(*(Fraction(x) for x in (A, B, C, D, E)), domain=(lo, hi), clamped=cl)
    return None


def _shrink(ok, value: int) -> int:
    lo, hi = 0, value  # ok(hi) holds; validity is monotone in D and in E
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return hi


@dataclass
class EquivalenceReport:
    forward: Optional[WitnessConstants]
    backward: Optional[WitnessConstants]

    @property
    def equivalent(self) -> bool:
        return self.forward is not None and self.backward is not None

    def __str__(self):
        fw = self.forward or "no witness within bounds"
        bw = self.backward or "no witness within bounds"
        return f"f < g: {fw}\ng < f: {bw}"


def equivalent(f, g, **kwargs) -> Union[bool, EquivalenceReport]:
    if isinstance(f, GrowthTable):
        return EquivalenceReport(find_witness(f, g, **kwargs), find_witness(g, f, **kwargs))
    return equivalent_symbolic(f, g)


def classify_table(t: GrowthTable, max_exp: int = 3) -> dict:
    """Match a table against reference growth classes by two-sided witness search.

    Reports, for each reference, whether witnesses were found in each
    direction.  Only unclamped witnesses count.
    """
    lo, hi = t.domain
    refs = {
        "zero": Zero(),
        "linear": Polynomial(1, 1),
        "quadratic": Polynomial(1, 2),
        "cubic": Polynomial(1, 3),
        "exponential": Exponential(2),
    }
    out = {}
    for name, fn in refs.items():
        r = GrowthTable.from_function(fn, lo, hi)
        out[name] = EquivalenceReport(find_witness(t, r, max_exp), find_witness(r, t, max_exp))
    return out
