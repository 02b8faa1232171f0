"""Partial Steiner triple systems as immutable incidence structures.

Points are dense indices ``0..v-1`` with a parallel tuple of string labels;
lines are ascending index triples kept in sorted order. The partial
third-point operation returns ``None`` where it is undefined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

import numpy as np

Line = tuple[int, int, int]
UNDEFINED = None


class InvalidStructure(ValueError):
    def __init__(self, violations: list[str], name: str = ""):
        self.violations = violations
        head = f"{name or 'structure'} is not a partial Steiner triple system"
        super().__init__(head + ": " + "; ".join(violations))


@dataclass(frozen=True)
class IncidenceStructure:
    points: tuple[str, ...]
    lines: tuple[Line, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(str(p) for p in self.points))
        object.__setattr__(
            self, "lines", tuple(sorted(tuple(sorted(int(x) for x in L)) for L in self.lines))
        )

    @classmethod
    def build(cls, points: Iterable, lines: Iterable[Iterable], name: str = "") -> "IncidenceStructure":
        """Construct and validate; raises InvalidStructure on any violation."""
        s = cls(tuple(points), tuple(tuple(L) for L in lines), name)
        problems = validate(s)
        if problems:
            raise InvalidStructure(problems, name)
        return s

    @classmethod
    def from_label_lines(cls, blocks: Iterable[Sequence[str]], name: str = "", points=None):
        """Lines given by labels; unknown labels are registered in order of appearance."""
        labels = list(points or [])
        index = {p: i for i, p in enumerate(labels)}
        lines = []
        for block in blocks:
            for p in block:
                if p not in index:
                    index[p] = len(labels)
                    labels.append(p)
            lines.append(tuple(index[p] for p in block))
        return cls.build(labels, lines, name)

    def __repr__(self):
        return f"IncidenceStructure({self.name!r}, v={self.v}, b={self.b})"

    def renamed(self, name: str) -> "IncidenceStructure":
        return IncidenceStructure(self.points, self.lines, name)

    def relabeled(self, labels: Sequence[str] | None = None) -> "IncidenceStructure":
        """Same incidences with fresh labels (``0..v-1`` by default)."""
        labels = [str(i) for i in range(self.v)] if labels is None else list(labels)
        return IncidenceStructure(tuple(labels), self.lines, self.name)

    @property
    def v(self) -> int:
        return len(self.points)

    @property
    def b(self) -> int:
        return len(self.lines)

    @cached_property
    def index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def label_kind(self) -> str:
        return "product" if self.points and all("|" in p for p in self.points) else "plain"

    @cached_property
    def third(self) -> np.ndarray:
        """``third[p, q]`` is p (p == q), the third point of line pq, or -1."""
        t = np.full((self.v, self.v), -1, dtype=np.int32)
        np.fill_diagonal(t, np.arange(self.v))
        for a, b, c in self.lines:
            t[a, b] = t[b, a] = c
            t[a, c] = t[c, a] = b
            t[b, c] = t[c, b] = a
        return t

    @cached_property
    def third_rows(self) -> list[list[int]]:
        # plain lists are much faster than numpy scalars inside search loops
        return self.third.tolist()

    @cached_property
    def collinear(self) -> np.ndarray:
        c = self.third >= 0
        np.fill_diagonal(c, False)
        return c

    @cached_property
    def neighbours(self) -> list[frozenset[int]]:
        return [frozenset(np.flatnonzero(row).tolist()) for row in self.collinear]

    @cached_property
    def lines_through(self) -> list[tuple[int, ...]]:
        through: list[list[int]] = [[] for _ in range(self.v)]
        for k, L in enumerate(self.lines):
            for p in L:
                through[p].append(k)
        return [tuple(t) for t in through]

    @cached_property
    def line_index(self) -> dict[Line, int]:
        return {L: k for k, L in enumerate(self.lines)}

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(t) for t in self.lines_through)

    def is_line(self, pts: Iterable[int]) -> bool:
        return tuple(sorted(pts)) in self.line_index

    def label(self, p: int) -> str:
        return self.points[p]


def validate(s: IncidenceStructure) -> list[str]:
    """All violated PSTS invariants; an empty list means ``s`` is valid."""
    problems = []
    labels_seen: dict[str, int] = {}
    for i, p in enumerate(s.points):
        if p in labels_seen:
            problems.append(f"duplicate label {p!r} at points {labels_seen[p]} and {i}")
        labels_seen.setdefault(p, i)
    pair_line: dict[tuple[int, int], int] = {}
    seen_lines: dict[Line, int] = {}
    for k, L in enumerate(s.lines):
        if len(L) != 3:
            problems.append(f"line {k} {L} does not have 3 points")
            continue
        if len(set(L)) != 3:
            problems.append(f"degenerate line {k} {L}")
            continue
        if any(p < 0 or p >= s.v for p in L):
            problems.append(f"line {k} {L} has a point index out of range 0..{s.v - 1}")
            continue
        if L in seen_lines:
            problems.append(f"duplicate line {L} (lines {seen_lines[L]} and {k})")
            continue
        seen_lines[L] = k
        for pair in combinations(L, 2):
            if pair in pair_line:
                j = pair_line[pair]
                problems.append(f"pair {pair} lies on lines {s.lines[j]} and {L}")
            else:
                pair_line[pair] = k
    return problems


def check_point(s: IncidenceStructure, p: int):
    if not 0 <= p < s.v:
        raise IndexError(f"point {p} out of range for {s!r}")


def third_point(s: IncidenceStructure, p: int, q: int) -> int | None:
    """p when p == q, the third point of the line through p and q, else None."""
    check_point(s, p)
    check_point(s, q)
    r = s.third_rows[p][q]
    return None if r < 0 else r


def are_collinear(s: IncidenceStructure, *pts: int) -> bool:
    """Distinct points all on one line (pairs: joined by a line)."""
    if len(pts) == 2:
        return bool(s.collinear[pts[0], pts[1]])
    if len(pts) == 3:
        return s.is_line(pts)
    raise ValueError("collinearity is defined for 2 or 3 points")


# -- triangles -----------------------------------------------------------------


def is_triangle(s: IncidenceStructure, pts: Sequence[int]) -> bool:
    if len(set(pts)) != 3:
        return False
    p, q, r = pts
    c = s.collinear
    return bool(c[p, q] and c[q, r] and c[p, r]) and not s.is_line(pts)


def triangles(s: IncidenceStructure) -> list[tuple[int, int, int]]:
    """All triangles, as ascending triples in lexicographic order."""
    out = []
    nb = s.neighbours
    for p in range(s.v):
        higher = sorted(q for q in nb[p] if q > p)
        for i, q in enumerate(higher):
            for r in higher[i + 1 :]:
                if r in nb[q] and s.third_rows[p][q] != r:
                    out.append((p, q, r))
    return out


def triangle_counts(s: IncidenceStructure) -> np.ndarray:
    """Number of triangles through each point."""
    a = s.collinear.astype(np.int64)
    closed_walks = np.einsum("ij,jk,ki->i", a, a, a)
    return closed_walks // 2 - np.array(s.degrees, dtype=np.int64)


class Derived(NamedTuple):
    kind: str  # "triangle" | "line" | "degenerate"
    points: tuple[int, ...]


def derived_triangle(s: IncidenceStructure, t: Sequence[int]) -> Derived:
    """The set {p*q, q*r, r*p} of a triangle and what kind of set it is."""
    if not is_triangle(s, t):
        raise ValueError(f"{tuple(t)} is not a triangle of {s!r}")
    p, q, r = t
    rows = s.third_rows
    pts = tuple(sorted({rows[p][q], rows[q][r], rows[r][p]}))
    return Derived(_kind(s, pts), pts)


def _kind(s: IncidenceStructure, pts: tuple[int, ...]) -> str:
    if len(pts) != 3 or not all(s.collinear[a, b] for a, b in combinations(pts, 2)):
        return "degenerate"
    return "line" if s.is_line(pts) else "triangle"


@dataclass
class TriangleSeries:
    ordered: list[tuple[int, int, int]]  # delta^(0), delta^(1), ... all triangles
    reason: str  # "closed" | "repeat" | "line" | "degenerate" | "truncated"
    final: tuple[int, ...] | None = None  # the halting set for line/degenerate
    period: int | None = None
    gamma: tuple[int, int, int] | None = None

    @property
    def sets(self) -> list[tuple[int, int, int]]:
        return [tuple(sorted(d)) for d in self.ordered]


def triangle_series(s: IncidenceStructure, t: Sequence[int], max_len: int = 64) -> TriangleSeries:
    """Iterate the inscribed-triangle map on an ordered triangle.

    Vertex ``j`` of the next triangle is the third point on the side opposite
    vertex ``j``, so each vertex position is a "thread". When the set series
    returns to the starting set after ``period`` steps, ``gamma[j]`` is the
    position of the start triangle that thread ``j`` lands on.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if not is_triangle(s, t):
        raise ValueError(f"{tuple(t)} is not a triangle of {s!r}")
    rows = s.third_rows
    delta = tuple(t)
    ordered = [delta]
    seen = {frozenset(delta): 0}
    while len(ordered) <= max_len:
        p, q, r = ordered[-1]
        nxt = (rows[q][r], rows[r][p], rows[p][q])
        key = frozenset(nxt)
        if key in seen:
            if seen[key] == 0:
                gamma = tuple(delta.index(x) for x in nxt)
                return TriangleSeries(ordered, "closed", period=len(ordered), gamma=gamma)
            return TriangleSeries(ordered, "repeat", period=len(ordered) - seen[key])
        kind = _kind(s, tuple(sorted(key)))
        if kind != "triangle":
            return TriangleSeries(ordered, kind, final=tuple(sorted(key)))
        seen[key] = len(ordered)
        ordered.append(nxt)
    return TriangleSeries(ordered[:max_len], "truncated")


def is_moufangian(s: IncidenceStructure) -> tuple[bool, tuple | None]:
    """Every triangle's derived set is a line; witness is a failing triangle."""
    for t in triangles(s):
        if derived_triangle(s, t).kind != "line":
            return False, t
    return True, None


def moufang_identity_holds(s: IncidenceStructure) -> bool:
    """(p*q)*(p*r) == q*r for every triangle and every choice of apex p."""
    rows = s.third_rows
    for t in triangles(s):
        for p, q, r in ((t[0], t[1], t[2]), (t[1], t[2], t[0]), (t[2], t[0], t[1])):
            if rows[rows[p][q]][rows[p][r]] != rows[q][r]:
                return False
    return True


# -- closures, parameters, components -------------------------------------------


def subspace_closure(s: IncidenceStructure, seed: Iterable[int]) -> frozenset[int]:
    """Smallest point set containing ``seed`` and closed under the third-point map."""
    closed = set(seed)
    if not closed:
        raise ValueError("seed must be nonempty")
    for p in closed:
        check_point(s, p)
    rows = s.third_rows
    frontier = list(closed)
    while frontier:
        p = frontier.pop()
        row = rows[p]
        for q in list(closed):
            r = row[q]
            if r >= 0 and r not in closed:
                closed.add(r)
                frontier.append(r)
    return frozenset(closed)


@dataclass(frozen=True)
class ConfigParams:
    v: int
    b: int
    k: int = 3
    r: int | None = None
    regular: bool = False

    def __str__(self):
        if self.regular:
            return f"({self.v}_{self.r}, {self.b}_{self.k})"
        return f"(v={self.v}, b={self.b}, k={self.k}, irregular)"


def params(s: IncidenceStructure) -> ConfigParams:
    degs = set(s.degrees)
    if len(degs) == 1:
        return ConfigParams(s.v, s.b, 3, degs.pop(), True)
    return ConfigParams(s.v, s.b, 3, None, False)


def connected_components(s: IncidenceStructure) -> list[list[int]]:
    """Components of the collinearity graph, each sorted, ordered by least point."""
    seen = [False] * s.v
    comps = []
    nb = s.neighbours
    for start in range(s.v):
        if seen[start]:
            continue
        seen[start] = True
        stack, comp = [start], []
        while stack:
            p = stack.pop()
            comp.append(p)
            for q in nb[p]:
                if not seen[q]:
                    seen[q] = True
                    stack.append(q)
        comps.append(sorted(comp))
    return comps


def induced(s: IncidenceStructure, pts: Iterable[int], name: str = "") -> IncidenceStructure:
    """Substructure on ``pts`` keeping the lines entirely inside it."""
    keep = sorted(set(pts))
    pos = {p: i for i, p in enumerate(keep)}
    lines = [tuple(pos[x] for x in L) for L in s.lines if all(x in pos for x in L)]
    return IncidenceStructure(tuple(s.points[p] for p in keep), tuple(lines), name or s.name)


def is_linear_space(s: IncidenceStructure) -> bool:
    return s.b * 3 == s.v * (s.v - 1) // 2 and bool(s.collinear.sum() == s.v * (s.v - 1))


# -- anti-cliques and hyperplanes -------------------------------------------------


def maximal_anticliques(s: IncidenceStructure) -> list[tuple[int, ...]]:
    """Inclusion-maximal sets of pairwise noncollinear points.

    Bron-Kerbosch with pivoting on the noncollinearity graph.
    """
    non = [set(range(s.v)) - s.neighbours[p] - {p} for p in range(s.v)]
    found: list[tuple[int, ...]] = []

    def expand(r: list[int], cand: set[int], excl: set[int]):
        if not cand and not excl:
            found.append(tuple(sorted(r)))
            return
        pivot = max(cand | excl, key=lambda u: len(non[u] & cand))
        for p in sorted(cand - non[pivot]):
            expand(r + [p], cand & non[p], excl & non[p])
            cand = cand - {p}
            excl = excl | {p}

    expand([], set(range(s.v)), set())
    return sorted(found)


def is_anticlique(s: IncidenceStructure, pts: Iterable[int]) -> bool:
    pts = list(pts)
    return not any(s.collinear[p, q] for p, q in combinations(pts, 2))


def is_anticlique_hyperplane(s: IncidenceStructure, H: Iterable[int]) -> bool:
    """Anti-clique meeting every line in exactly one point."""
    H = set(H)
    if not is_anticlique(s, H):
        return False
    return all(sum(p in H for p in L) == 1 for L in s.lines)


def noncollinearity_classes(s: IncidenceStructure) -> list[tuple[int, ...]] | None:
    """Classes of "equal or noncollinear" when that relation is an equivalence, else None."""
    classes: list[tuple[int, ...]] = []
    assigned = [False] * s.v
    for p in range(s.v):
        if assigned[p]:
            continue
        cls = [p] + [q for q in range(s.v) if q != p and not s.collinear[p, q]]
        for q in cls:
            mates = {x for x in range(s.v) if x != q and not s.collinear[q, x]} | {q}
            if mates != set(cls) or assigned[q]:
                return None
        for q in cls:
            assigned[q] = True
        classes.append(tuple(sorted(cls)))
    return classes
