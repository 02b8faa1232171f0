"""Isomorphisms, embeddings and automorphism groups of incidence structures.

Isomorphism search is individualization-refinement: point colours start from
local invariants (degree, triangles and Pasch configurations through the
point) and are refined by the colours of the line-mates of each point,
jointly on both structures so colour numbers stay comparable. Automorphism
groups are computed along a chain of point stabilisers: the order is the
product of the orbit lengths found at each level.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .constructions import weave_view
from .core import IncidenceStructure, derived_triangle, params, subspace_closure, triangle_counts, triangles
from .detect import Pattern, find_subconfig, perspective_pairs, veblen_counts

NOT_PRODUCT = None


class MorphismError(ValueError):
    pass


@dataclass(frozen=True)
class Morphism:
    kind: str  # "isomorphism" | "embedding" | "automorphism"
    map: tuple[int, ...]

    def __call__(self, p: int) -> int:
        return self.map[p]

    def __len__(self):
        return len(self.map)

    def compose(self, other: "Morphism") -> "Morphism":
        """``self`` after ``other``."""
        return Morphism(self.kind, tuple(self.map[x] for x in other.map))

    def inverse(self) -> "Morphism":
        inv = [0] * len(self.map)
        for i, x in enumerate(self.map):
            inv[x] = i
        return Morphism(self.kind, tuple(inv))

    def labelled(self, a: IncidenceStructure, b: IncidenceStructure) -> dict[str, str]:
        return {a.points[i]: b.points[x] for i, x in enumerate(self.map)}


def is_embedding(a: IncidenceStructure, b: IncidenceStructure, f: Sequence[int]) -> bool:
    if len(f) != a.v or len(set(f)) != a.v or any(not 0 <= x < b.v for x in f):
        return False
    return all(b.is_line(f[x] for x in L) for L in a.lines)


def is_isomorphism(a: IncidenceStructure, b: IncidenceStructure, f: Sequence[int]) -> bool:
    return a.v == b.v and a.b == b.b and is_embedding(a, b, f)


def is_automorphism(s: IncidenceStructure, f: Sequence[int]) -> bool:
    return is_isomorphism(s, s, f)


def identity(s: IncidenceStructure, kind="automorphism") -> Morphism:
    return Morphism(kind, tuple(range(s.v)))


# -- colour refinement ---------------------------------------------------------------------


def derived_profile(s: IncidenceStructure) -> list[tuple[int, int, int]]:
    """Per point: triangles through it whose derived set is a line / triangle / degenerate."""
    prof = [[0, 0, 0] for _ in range(s.v)]
    slot = {"line": 0, "triangle": 1, "degenerate": 2}
    for t in triangles(s):
        k = slot[derived_triangle(s, t).kind]
        for p in t:
            prof[p][k] += 1
    return [tuple(x) for x in prof]


@lru_cache(maxsize=128)
def point_invariants(s: IncidenceStructure) -> tuple[tuple, ...]:
    """Degree, triangle count, Pasch count, derived-set profile and number of
    Desargues-type perspectivities through each point."""
    tri = triangle_counts(s)
    veb = veblen_counts(s)
    prof = derived_profile(s)
    des = [0] * s.v
    for roles in perspective_pairs(s):
        if s.is_line((roles["fab"], roles["fbc"], roles["fca"])):
            for p in roles.values():
                des[p] += 1
    return tuple((s.degrees[p], int(tri[p]), veb[p], prof[p], des[p]) for p in range(s.v))


def closure_profile(s: IncidenceStructure) -> tuple:
    """Sorted multiset of the sizes of subspaces spanned by triangles."""
    return tuple(sorted(Counter(len(subspace_closure(s, t)) for t in triangles(s)).items()))


@lru_cache(maxsize=128)
def invariants(s: IncidenceStructure, closure_limit: int = 64) -> tuple:
    """Isomorphism invariants compared before any search.

    The triangle-closure profile is included only up to ``closure_limit`` points.
    """
    pinv = point_invariants(s)
    return (
        params(s),
        tuple(sorted(Counter(s.degrees).items())),
        sum(x[1] for x in pinv) // 3,
        sum(x[2] for x in pinv) // 6,
        tuple(sorted(Counter(pinv).items())),
        closure_profile(s) if s.v <= closure_limit else None,
    )


def _relabel(sigs_a, sigs_b):
    table = {sig: k for k, sig in enumerate(sorted(set(sigs_a) | set(sigs_b)))}
    return [table[x] for x in sigs_a], [table[x] for x in sigs_b]


def _step(s: IncidenceStructure, colors: list[int]) -> list[tuple]:
    out = []
    for p in range(s.v):
        mates = []
        for k in s.lines_through[p]:
            x, y = (colors[q] for q in s.lines[k] if q != p)
            mates.append((x, y) if x <= y else (y, x))
        mates.sort()
        out.append((colors[p], tuple(mates)))
    return out


def refine(a: IncidenceStructure, b: IncidenceStructure, ca: list[int], cb: list[int]):
    """Refine two colourings to a joint equitable partition; None if they diverge."""
    while True:
        if Counter(ca) != Counter(cb):
            return None
        n = len(set(ca))
        na, nb = _relabel(_step(a, ca), _step(b, cb))
        if Counter(na) != Counter(nb):
            return None
        ca, cb = na, nb
        if len(set(ca)) == n:
            return ca, cb


def _target_cell(colors: list[int]) -> int | None:
    sizes = Counter(colors)
    # the largest cell: individualizing there forces the most third points
    multi = [(-n, c) for c, n in sizes.items() if n > 1]
    return min(multi)[1] if multi else None


def _individualize(colors: list[int], p: int) -> list[int]:
    out = list(colors)
    out[p] = max(colors) + 1
    return out


def _search(a, b, ca, cb) -> Iterator[tuple[int, ...]]:
    cell = _target_cell(ca)
    if cell is None:
        pos = {c: q for q, c in enumerate(cb)}
        f = tuple(pos[c] for c in ca)
        if is_isomorphism(a, b, f):
            yield f
        return
    p = ca.index(cell)
    for q in [x for x, c in enumerate(cb) if c == cell]:
        r = refine(a, b, _individualize(ca, p), _individualize(cb, q))
        if r is not None:
            yield from _search(a, b, *r)


def _start(a, b, ca=None, cb=None):
    ia, ib = point_invariants(a), point_invariants(b)
    ca, cb = _relabel(
        [(x, y) for x, y in zip(ca or [0] * a.v, ia)],
        [(x, y) for x, y in zip(cb or [0] * b.v, ib)],
    )
    return refine(a, b, ca, cb)


def isomorphism(a: IncidenceStructure, b: IncidenceStructure) -> Morphism | None:
    """A witness isomorphism a -> b, or None when none exists."""
    if a.v != b.v or a.b != b.b or invariants(a) != invariants(b):
        return None
    start = _start(a, b)
    if start is None:
        return None
    for f in _search(a, b, *start):
        return Morphism("isomorphism", f)
    return None


def are_isomorphic(a, b) -> bool:
    return isomorphism(a, b) is not None


def embedding(a: IncidenceStructure, b: IncidenceStructure) -> Morphism | None:
    """An injective map sending every line of a onto a line of b, or None."""
    if a.v > b.v:
        return None
    hits = find_subconfig(b, Pattern.custom(a), limit=1)
    if not hits:
        return None
    return Morphism("embedding", hits[0].points)


# -- automorphism groups ---------------------------------------------------------------------


@dataclass(frozen=True)
class AutGroup:
    generators: tuple[Morphism, ...]
    order: int
    base: tuple[int, ...] = ()  # stabiliser chain base points

    def elements(self, cap: int = 200_000) -> list[Morphism]:
        """All group elements by closure; for desk-scale groups only."""
        gens = [g.map for g in self.generators]
        return [Morphism("automorphism", g) for g in enumerate_group(gens, cap=cap)]


def _orbit(start: int, gens: list[tuple[int, ...]]) -> set[int]:
    orbit = {start}
    frontier = [start]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = g[x]
            if y not in orbit:
                orbit.add(y)
                frontier.append(y)
    return orbit


def automorphism_group(s: IncidenceStructure, max_points: int = 200) -> AutGroup:
    """Generators and exact order of Aut(s)."""
    if s.v > max_points:
        raise MorphismError(f"{s!r} exceeds the {max_points}-point cap")
    start = _start(s, s)
    colors = start[0]
    gens: list[tuple[int, ...]] = []
    order = 1
    base = []
    while True:
        cell = _target_cell(colors)
        if cell is None:
            break
        p = colors.index(cell)
        level_gens: list[tuple[int, ...]] = []
        orbit = {p}
        fixed = _individualize(colors, p)
        for q in [x for x, c in enumerate(colors) if c == cell]:
            if q in orbit:
                continue
            r = refine(s, s, fixed, _individualize(colors, q))
            if r is None:
                continue
            f = next(_search(s, s, *r), None)
            if f is not None:
                level_gens.append(f)
                orbit = _orbit(p, level_gens)
        order *= len(orbit)
        gens.extend(level_gens)
        base.append(p)
        colors = refine(s, s, fixed, fixed)[0]
    if not gens:
        gens = [tuple(range(s.v))]
    return AutGroup(tuple(Morphism("automorphism", g) for g in gens), order, tuple(base))


def enumerate_group(gens: Sequence[Sequence[int]], n: int | None = None, cap: int = 200_000) -> list[tuple[int, ...]]:
    """All elements of the permutation group generated by ``gens`` (BFS closure)."""
    gens = [tuple(g) for g in gens]
    if n is None:
        n = len(gens[0])
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g[i] for i in x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise MorphismError(f"group larger than cap {cap}")
        frontier = nxt
    return sorted(seen)


def brute_force_automorphisms(s: IncidenceStructure) -> list[tuple[int, ...]]:
    """Every automorphism by plain backtracking on points (no refinement).

    Points are assigned in breadth-first order of the collinearity graph. A
    point goes to q only if, against every point assigned before it,
    collinearity and known third points are preserved.
    """
    rows = s.third_rows
    v = s.v
    order: list[int] = []
    seen = [False] * v
    for root in range(v):
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        while queue:
            x = queue.pop(0)
            order.append(x)
            for y in sorted(s.neighbours[x]):
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
    out = []
    f = [-1] * v
    used = [False] * v

    def fits(k, q):
        p = order[k]
        for x in order[:k]:
            r, r2 = rows[p][x], rows[q][f[x]]
            if (r < 0) != (r2 < 0):
                return False
            if r >= 0 and f[r] >= 0 and f[r] != r2:
                return False
        return True

    def rec(k):
        if k == v:
            out.append(tuple(f))
            return
        p = order[k]
        for q in range(v):
            if not used[q] and s.degrees[q] == s.degrees[p] and fits(k, q):
                f[p] = q
                used[q] = True
                rec(k + 1)
                used[q] = False
        f[p] = -1

    rec(0)
    return sorted(out)


# -- product automorphisms of weaved structures ------------------------------------------------


def _weave_index(s: IncidenceStructure) -> dict[tuple[int, int], int]:
    wv = weave_view(s)
    return {(wv.base_of[p], wv.weight[p]): p for p in range(s.v)}


def product_automorphism(s: IncidenceStructure, f: Morphism | Sequence[int], u: int) -> Morphism:
    """(a, i) -> (f(a), i + u) on a weaved structure."""
    wv = weave_view(s)
    fmap = f.map if isinstance(f, Morphism) else tuple(f)
    if not is_automorphism(wv.base, fmap):
        raise MorphismError("f is not an automorphism of the base")
    idx = _weave_index(s)
    F = tuple(idx[(fmap[wv.base_of[p]], (wv.weight[p] + u) % wv.m)] for p in range(s.v))
    if not is_automorphism(s, F):
        raise MorphismError("product map is not an automorphism")  # cannot happen for weaves
    return Morphism("automorphism", F)


def induced_base_map(s: IncidenceStructure, F: Morphism | Sequence[int]) -> Morphism | None:
    """The base map a -> b when F sends each fibre {a} x C_m onto a fibre {b} x C_m."""
    wv = weave_view(s)
    Fmap = F.map if isinstance(F, Morphism) else tuple(F)
    f = [-1] * wv.base.v
    for p in range(s.v):
        a, b = wv.base_of[p], wv.base_of[Fmap[p]]
        if f[a] == -1:
            f[a] = b
        elif f[a] != b:
            return None
    if sorted(f) != list(range(wv.base.v)):
        return None
    return Morphism("automorphism", tuple(f))


def decompose_automorphism(s: IncidenceStructure, F: Morphism | Sequence[int]):
    """(f, u) with F = f x tau_u, or NOT_PRODUCT (None)."""
    Fmap = F.map if isinstance(F, Morphism) else tuple(F)
    if not is_automorphism(s, Fmap):
        raise MorphismError("F is not an automorphism")
    wv = weave_view(s)
    f = induced_base_map(s, Fmap)
    if f is None or not is_automorphism(wv.base, f.map):
        return NOT_PRODUCT
    shifts = {(wv.weight[Fmap[p]] - wv.weight[p]) % wv.m for p in range(s.v)}
    if len(shifts) != 1:
        return NOT_PRODUCT
    return f, shifts.pop()


def permutes_line_fibres(s: IncidenceStructure, F: Morphism | Sequence[int]) -> bool:
    """F maps every set L x C_m (L a base line) onto another such set."""
    wv = weave_view(s)
    Fmap = F.map if isinstance(F, Morphism) else tuple(F)
    fibres: dict[tuple, frozenset] = {}
    for p in range(s.v):
        fibres.setdefault(wv.base_of[p], set()).add(p)
    blocks = {frozenset(fibres[a] | fibres[b] | fibres[c]) for a, b, c in wv.base.lines}
    return all(frozenset(Fmap[p] for p in blk) in blocks for blk in blocks)
