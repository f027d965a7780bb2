"""Finite presentations, free reduction and exact combinatorial area.

Words are tuples of non-zero ints: ``+i`` is generator ``i`` (1-based) and
``-i`` its inverse.  In text, a lowercase letter is a generator and the
matching uppercase letter is its inverse, so ``abAB`` is the commutator.

The area of a null-homotopic word is found by best-first search over
cyclic words: one move inserts a cyclic conjugate of a relator (or of its
inverse) at some position and freely reduces.  Van Kampen's lemma makes the
minimal number of moves equal to the minimal van Kampen diagram area.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence

Word = tuple  # tuple[int, ...]


# -- words -----------------------------------------------------------------

def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def rotations(w: Sequence[int]) -> list[Word]:
    w = tuple(w)
    return [w[i:] + w[:i] for i in range(len(w))] or [()]


def canonical_cyclic(w: Sequence[int]) -> Word:
    """Least rotation of the cyclic reduction of ``w`` or of its inverse.

    Area is invariant under conjugation and inversion, so this is a safe
    memo key for area computations.
    """
    c = cyclic_reduce(w)
    if not c:
        return ()
    return min(min(rotations(c)), min(rotations(inverse(c))))


def exponent_sums(w: Sequence[int], n: int) -> list[int]:
    s = [0] * n
    for x in w:
        s[abs(x) - 1] += 1 if x > 0 else -1
    return s


# -- presentations -----------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    generator_names: tuple
    relators: tuple = ()

    def __post_init__(self):
        names = tuple(self.generator_names)
        if not names:
            raise ValueError("presentation needs at least one generator")
        for g in names:
            if len(g) != 1 or not g.islower():
                raise ValueError(f"generator names must be single lowercase letters, got {g!r}")
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        rels = tuple(tuple(r) for r in self.relators)
        for r in rels:
            if not r:
                raise ValueError("empty relator")
            if any(x == 0 or abs(x) > len(names) for x in r):
                raise ValueError(f"relator {r} uses an unknown generator")
            if cyclic_reduce(r) != r:
                raise ValueError(f"relator {r} is not cyclically reduced")
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "relators", rels)

    @property
    def generator_count(self) -> int:
        return len(self.generator_names)

    @property
    def max_relator_length(self) -> int:
        return max((len(r) for r in self.relators), default=0)

    def parse_word(self, text: str) -> Word:
        text = text.strip()
        if text == "1":
            return ()
        out = []
        for ch in text:
            low = ch.lower()
            if low not in self.generator_names:
                raise ValueError(f"unknown letter {ch!r} in word {text!r}")
            i = self.generator_names.index(low) + 1
            out.append(i if ch.islower() else -i)
        return tuple(out)

    def format_word(self, w: Sequence[int]) -> str:
        return "".join(
            self.generator_names[abs(x) - 1] if x > 0 else self.generator_names[abs(x) - 1].upper()
            for x in w
        )

    def relator_rotations(self) -> list[Word]:
        """All cyclic conjugates of relators and their inverses, deduplicated."""
        seen = set()
        out = []
        for r in self.relators:
            for c in rotations(r) + rotations(inverse(r)):
                if c not in seen:
                    seen.add(c)
                    out.append(c)
        return sorted(out)

    def to_text(self) -> str:
        lines = ["gen " + " ".join(self.generator_names)]
        lines += ["rel " + self.format_word(r) for r in self.relators]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Presentation":
        gens: Optional[tuple] = None
        rel_text = []
        for n, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, rest = line.partition(" ")
            if key == "gen":
                if gens is not None:
                    raise ValueError(f"line {n}: duplicate gen line")
                gens = tuple(rest.split())
            elif key == "rel":
                rel_text.append(rest.strip())
            else:
                raise ValueError(f"line {n}: expected 'gen' or 'rel', got {key!r}")
        if gens is None:
            raise ValueError("missing gen line")
        probe = cls(gens)
        return cls(gens, tuple(probe.parse_word(r) for r in rel_text))


def parse_presentation(text: str) -> Presentation:
    return Presentation.from_text(text)


def free_group(n: int = 2) -> Presentation:
    return Presentation(tuple("abcdefgh"[:n]))


def cyclic_group(n: int) -> Presentation:
    return Presentation(("a",), ((1,) * n,))


def z2() -> Presentation:
    return Presentation(("a", "b"), ((1, 2, -1, -2),))


# -- word problem for the built-in families ----------------------------------

def _is_commutator(r: Word) -> Optional[frozenset]:
    if len(r) != 4:
        return None
    for c in rotations(r) + rotations(inverse(r)):
        x, y = c[0], c[1]
        if abs(x) != abs(y) and c == (x, y, -x, -y):
            return frozenset((abs(x), abs(y)))
    return None


def word_problem_oracle(P: Presentation) -> Optional[Callable[[Sequence[int]], bool]]:
    """Return ``is_trivial(word)`` for recognised families, else ``None``.

    Recognised: direct products whose factors are free groups or cyclic
    groups ``<a | a^n>``, presented by commutators between factors plus one
    power relator per finite cyclic factor.  This covers free groups, finite
    cyclic groups, Z^2 and their products.
    """
    n = P.generator_count
    commuting = set()
    powers: dict[int, int] = {}
    for r in P.relators:
        pair = _is_commutator(r)
        if pair is not None:
            commuting.add(pair)
            continue
        if len({abs(x) for x in r}) == 1 and len(set(r)) == 1:
            g = abs(r[0])
            if g in powers:
                return None
            powers[g] = len(r)
            continue
        return None
    # blocks = components of the non-commuting graph
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in itertools.combinations(range(1, n + 1), 2):
        if frozenset((x, y)) not in commuting:
            parent[find(x)] = find(y)
    blocks: dict[int, list[int]] = {}
    for g in range(1, n + 1):
        blocks.setdefault(find(g), []).append(g)
    for members in blocks.values():
        if len(members) > 1:
            if any(frozenset(p) in commuting for p in itertools.combinations(members, 2)):
                return None
            if any(g in powers for g in members):
                return None

    block_list = [tuple(m) for m in blocks.values()]

    def is_trivial(w: Sequence[int]) -> bool:
        for members in block_list:
            proj = [x for x in w if abs(x) in members]
            if len(members) == 1:
                g = members[0]
                s = sum(1 if x > 0 else -1 for x in proj)
                if g in powers:
                    if s % powers[g]:
                        return False
                elif s:
                    return False
            elif free_reduce(proj):
                return False
        return True

    return is_trivial


UNREACHABLE = 1 << 30  # bound for words that are non-trivial in the abelianisation


def exponent_area_bound(P: Presentation) -> Callable[[Sequence[int]], int]:
    """Lower bound ``max_g ceil(|sigma_g(w)| / m_g)`` from exponent sums.

    ``m_g`` is the largest ``|sigma_g(r)|`` over relators ``r``; a word with
    non-zero exponent sum in a generator balanced by every relator gets an
    unreachable bound.
    """
    n = P.generator_count
    m = [max((abs(exponent_sums(r, n)[g]) for r in P.relators), default=0) for g in range(n)]

    def bound(w: Sequence[int]) -> int:
        best = 0
        for g, sg in enumerate(exponent_sums(w, n)):
            if sg:
                best = max(best, UNREACHABLE if m[g] == 0 else -(-abs(sg) // m[g]))
        return best

    return bound


def combined_area_bound(P: Presentation) -> Callable[[Sequence[int]], int]:
    parts = [exponent_area_bound(P)]
    wind = winding_area_bound(P)
    if wind is not None:
        parts.append(wind)
    return lambda w: max(b(w) for b in parts)


def winding_area_bound(P: Presentation) -> Optional[Callable[[Sequence[int]], int]]:
    """Lower bound on area from winding numbers of projected lattice paths, or ``None``.

    For every commutator relator ``[x, y]`` with ``x``, ``y`` of infinite
    order, project the word to the ``(x, y)`` lattice.  Inserting that
    relator changes the winding number of exactly one unit cell by one;
    any other relator or a free cancellation changes no winding number.
    The total ``sum |winding|`` over all cells and pairs is therefore a
    consistent search heuristic, and it is exact for free abelian groups
    of rank two.
    """
    powered = {abs(r[0]) for r in P.relators if len(set(r)) == 1}
    pairs = []
    for r in P.relators:
        pair = _is_commutator(r)
        if pair is not None and not (pair & powered):
            pairs.append(tuple(sorted(pair)))
    if not pairs:
        return None
    pairs = sorted(set(pairs))

    def bound(w: Sequence[int]) -> int:
        total = 0
        for gx, gy in pairs:
            x = y = 0
            columns: dict[int, list] = {}
            for c in w:
                a = abs(c)
                if a == gx:
                    step = 1 if c > 0 else -1
                    col = x if step > 0 else x - 1
                    columns.setdefault(col, []).append((y, step))
                    x += step
                elif a == gy:
                    y += 1 if c > 0 else -1
            if x != 0 or y != 0:
                continue  # not closed in this projection
            for events in columns.values():
                net: dict[int, int] = {}
                for yy, st in events:
                    net[yy] = net.get(yy, 0) + st
                hs = sorted(net)
                # winding of cell (col, j) is the net sign of x-edges above j
                above = sum(net.values())
                for h0, h1 in zip(hs, hs[1:]):
                    above -= net[h0]
                    total += abs(above) * (h1 - h0)
        return total

    return bound


# -- area search -------------------------------------------------------------

@dataclass
class AreaLimits:
    max_area: int = 64
    max_word_length: Optional[int] = None  # default: 2|w| + 2 * max relator length
    max_nodes: int = 2_000_000


@dataclass
class AreaResult:
    status: str  # "Exact", "LowerBound", "NotNullhomotopic", "Unknown"
    area: Optional[int] = None
    lower_bound: int = 0
    nodes_expanded: int = 0
    max_length_reached: int = 0
    length_bound: int = 0

    @property
    def exact(self) -> bool:
        return self.status == "Exact"

    def __str__(self) -> str:
        if self.status == "Exact":
            return f"Exact {self.area}"
        if self.status == "LowerBound":
            return f"LowerBound {self.lower_bound}"
        if self.status == "Unknown":
            return f"Unknown (area >= {self.lower_bound})"
        return "NotNullhomotopic"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "area": self.area,
            "lower_bound": self.lower_bound,
            "nodes_expanded": self.nodes_expanded,
            "max_length_reached": self.max_length_reached,
            "length_bound": self.length_bound,
        }


def area_search(
    word: Sequence[int],
    insertions: Callable[[Word, int], Iterable[Word]],
    *,
    max_area: int,
    max_length: int,
    max_nodes: int,
    canon: Callable[[Sequence[int]], Word] = canonical_cyclic,
    lower_bound: Optional[Callable[[Word], int]] = None,
) -> AreaResult:
    """Best-first search for the fewest relator insertions reducing ``word`` to 1.

    ``insertions(s, i)`` yields the cyclic relator words that may be inserted
    before position ``i`` of state ``s``.  ``lower_bound`` must be consistent
    (change by at most one per insertion); then the first time the empty
    word is popped its cost is optimal among all insertion sequences whose
    intermediate words stay within ``max_length``.  Word length itself is
    not a usable bound: after an inserted relator cancels completely, the
    letters on either side of it may keep cancelling.  Ties on ``g + h`` go
    to the deeper state, then to the smaller word.
    """
    start = canon(word)

    def h(s):
        return lower_bound(s) if lower_bound is not None else 0

    best = {start: 0}
    heap = [(h(start), 0, start)]
    nodes = 0
    longest = len(start)
    while heap:
        f, negg, s = heapq.heappop(heap)
        g = -negg
        if g > best.get(s, g):
            continue
        if not s:
            return AreaResult("Exact", g, g, nodes, longest, max_length)
        if f > max_area:
            return AreaResult("LowerBound", None, f, nodes, longest, max_length)
        nodes += 1
        if nodes > max_nodes:
            return AreaResult("Unknown", None, f, nodes, longest, max_length)
        seen_here = set()
        for i in range(len(s)):
            for r in insertions(s, i):
                t = canon(s[:i] + r + s[i:])
                if t in seen_here or len(t) > max_length:
                    continue
                seen_here.add(t)
                if g + 1 < best.get(t, max_area + 2):
                    best[t] = g + 1
                    longest = max(longest, len(t))
                    heapq.heappush(heap, (g + 1 + h(t), -(g + 1), t))
    return AreaResult("Unknown", None, 0, nodes, longest, max_length)


def default_length_bound(word_length: int, max_relator_length: int) -> int:
    return 2 * word_length + 2 * max_relator_length


def combinatorial_area(
    w: Sequence[int], P: Presentation, limits: Optional[AreaLimits] = None
) -> AreaResult:
    limits = limits or AreaLimits()
    w = tuple(w)
    if not is_reduced(w):
        raise ValueError("word must be freely reduced")
    max_len = limits.max_word_length or default_length_bound(len(w), P.max_relator_length)
    oracle = word_problem_oracle(P)
    bound = combined_area_bound(P)
    if (oracle is not None and not oracle(w)) or bound(w) >= UNREACHABLE:
        return AreaResult("NotNullhomotopic", length_bound=max_len)
    if not cyclic_reduce(w):
        return AreaResult("Exact", 0, 0, 0, 0, max_len)
    rots = P.relator_rotations()
    res = area_search(
        w,
        lambda s, i: rots,
        max_area=limits.max_area,
        max_length=max_len,
        max_nodes=limits.max_nodes,
        lower_bound=bound,
    )
    return res


# -- Dehn function -------------------------------------------------------------

def reduced_words(n_generators: int, length: int) -> Iterator[Word]:
    letters = [g for i in range(1, n_generators + 1) for g in (i, -i)]

    def extend(prefix):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for x in letters:
            if prefix and prefix[-1] == -x:
                continue
            prefix.append(x)
            yield from extend(prefix)
            prefix.pop()

    yield from extend([])


@dataclass
class DehnEntry:
    n: int
    value: int
    flagged: bool = False
    words_checked: int = 0
    witness: str = ""


def dehn_function(
    P: Presentation, n_max: int, limits: Optional[AreaLimits] = None
) -> "GrowthTable":
    """Tabulate ``n -> max area`` over null-homotopic reduced words of length <= n.

    Only cyclically reduced words of length exactly ``n`` are new at step
    ``n``; everything else is conjugate to a shorter word.  Entries whose
    maximum depended on a non-exact area are flagged.
    """
    from .growth import GrowthTable

    limits = limits or AreaLimits()
    oracle = word_problem_oracle(P)
    values: dict[int, int] = {0: 0}
    flags: dict[int, bool] = {0: False}
    cache: dict[Word, AreaResult] = {}
    running, running_flag = 0, False
    for n in range(1, n_max + 1):
        classes = set()
        for w in reduced_words(P.generator_count, n):
            if w[0] == -w[-1] and n > 1:
                continue
            if oracle is not None and not oracle(w):
                continue
            classes.add(canonical_cyclic(w))
        for c in sorted(classes):
            if c not in cache:
                cache[c] = combinatorial_area(c, P, limits)
            res = cache[c]
            if res.status == "Exact":
                running = max(running, res.area)
            elif res.status == "NotNullhomotopic":
                continue
            elif oracle is None and res.lower_bound == 0:
                # unresolved and possibly non-trivial: record uncertainty only
                running_flag = True
            else:
                running = max(running, res.lower_bound)
                running_flag = True
        values[n] = running
        flags[n] = running_flag
    return GrowthTable(values, flags)
