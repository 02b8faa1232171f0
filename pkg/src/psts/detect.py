"""Subconfiguration search and configuration-level predicates.

``find_subconfig`` runs a point-by-point backtracking search for
line-preserving injections of a small pattern into a host. Pattern points are
ordered so that most of them are forced as third points of already placed
pairs. Desargues and K4-closure occurrences use dedicated enumerators shaped
after their geometric description; Pasch (Veblen) occurrences have a fast
counter that the generic search cross-checks in the tests.
"""

from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Iterator, NamedTuple, Sequence

from .constructions import (
    PERMS,
    catalog,
    grassmannian,
    poly_triangle,
    weave_view,
)
from .core import IncidenceStructure, derived_triangle, is_triangle, triangles

ALL = None


@dataclass(frozen=True)
class Pattern:
    kind: str
    m: int | None = None
    gamma: str | None = None
    structure: IncidenceStructure | None = field(default=None, compare=False)

    KINDS = ("veblen", "fano", "desargues", "miter", "pappus", "poly", "k4closure", "custom")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        if self.kind == "poly":
            if self.m is None or self.m < 3 or self.gamma not in ("id", "tau1", "sigma0"):
                raise ValueError("poly pattern needs m >= 3 and gamma in {id, tau1, sigma0}")
        if self.kind == "custom" and self.structure is None:
            raise ValueError("custom pattern needs a structure")

    @classmethod
    def parse(cls, text: str) -> "Pattern":
        """``veblen``, ``pasch``, ``fano``, ``poly(4,sigma0)``, or any catalog name (custom)."""
        t = text.strip().lower()
        if t == "pasch":
            t = "veblen"
        hit = re.fullmatch(r"poly\((\d+),(\w+)\)", t.replace(" ", ""))
        if hit:
            return cls("poly", int(hit.group(1)), hit.group(2))
        if t in cls.KINDS and t not in ("poly", "custom"):
            return cls(t)
        return cls.custom(catalog(t))

    @classmethod
    def custom(cls, s: IncidenceStructure) -> "Pattern":
        return cls("custom", structure=s)

    @property
    def label(self) -> str:
        if self.kind == "poly":
            return f"poly({self.m},{self.gamma})"
        if self.kind == "custom":
            return f"custom({self.structure.name})"
        return self.kind

    def instance(self) -> IncidenceStructure:
        """The pattern as a structure (the K4-closure has no single instance)."""
        if self.kind == "custom":
            return self.structure
        if self.kind == "poly":
            return poly_triangle(self.m, self.gamma)
        if self.kind == "veblen":
            return catalog("veblen")
        if self.kind == "fano":
            return catalog("pg", 2)
        if self.kind == "desargues":
            return grassmannian(5)
        if self.kind == "miter":
            return catalog("miter")
        if self.kind == "pappus":
            return poly_triangle(3, "id")
        raise ValueError("k4closure has no fixed instance")


@dataclass(frozen=True)
class SubconfigHit:
    points: tuple[int, ...]  # host image of pattern point k at position k
    lines: tuple[tuple[int, int, int], ...]  # matched host lines, sorted

    @property
    def role_map(self) -> dict[int, int]:
        return dict(enumerate(self.points))

    @property
    def key(self):
        return (tuple(sorted(self.points)), self.lines)


# -- generic backtracking ----------------------------------------------------------------


class _Step(NamedTuple):
    point: int
    closing: tuple[tuple[int, int], ...]  # placed pairs whose line's third point is this one
    anchors: tuple[int, ...]  # placed points sharing a line with this one
    pending: tuple[int, ...]  # placed q whose line with this point has an unplaced third point


def _plan(pat: IncidenceStructure) -> list[_Step]:
    placed: list[int] = []
    done = set()
    steps = []
    while len(placed) < pat.v:
        best, best_key = None, None
        for p in range(pat.v):
            if p in done:
                continue
            closing = anchors = 0
            for k in pat.lines_through[p]:
                others = [x for x in pat.lines[k] if x != p]
                n_in = sum(x in done for x in others)
                closing += n_in == 2
                anchors += n_in
            key = (closing, anchors, pat.degrees[p], -p)
            if best_key is None or key > best_key:
                best, best_key = p, key
        p = best
        closing, anchors, pending = [], [], []
        for k in pat.lines_through[p]:
            x, y = (q for q in pat.lines[k] if q != p)
            if x in done and y in done:
                closing.append((x, y))
                anchors.extend((x, y))
            elif x in done or y in done:
                q = x if x in done else y
                anchors.append(q)
                pending.append(q)
        steps.append(_Step(p, tuple(closing), tuple(sorted(set(anchors))), tuple(pending)))
        placed.append(p)
        done.add(p)
    return steps


def iter_embeddings(
    pat: IncidenceStructure,
    host: IncidenceStructure,
    roots: Sequence[int] | None = None,
) -> Iterator[tuple[int, ...]]:
    """Every injective line-preserving map pattern -> host, as image tuples.

    ``roots`` restricts the image of the first planned pattern point.
    """
    if pat.v > host.v or pat.b > host.b or pat.v == 0:
        return
    plan = _plan(pat)
    rows = host.third_rows
    nb = host.neighbours
    hdeg = host.degrees
    pdeg = pat.degrees
    f = [-1] * pat.v
    used = [False] * host.v
    all_points = list(range(host.v))

    def rec(k: int):
        if k == len(plan):
            yield tuple(f)
            return
        p, closing, anchors, pending = plan[k]
        if closing:
            x, y = closing[0]
            c = rows[f[x]][f[y]]
            cands = [c] if c >= 0 else []
        elif anchors:
            common = nb[f[anchors[0]]]
            for q in anchors[1:]:
                common = common & nb[f[q]]
            cands = sorted(common)
        elif k == 0 and roots is not None:
            cands = list(roots)
        else:
            cands = all_points
        need = pdeg[p]
        for c in cands:
            if used[c] or hdeg[c] < need:
                continue
            ok = True
            for x, y in closing[1:]:
                if rows[f[x]][f[y]] != c:
                    ok = False
                    break
            if ok and closing:
                row = rows[c]
                for q in anchors:
                    if row[f[q]] < 0:
                        ok = False
                        break
            if ok:
                row = rows[c]
                for q in pending:
                    # the line's future third point must still be free
                    if used[row[f[q]]]:
                        ok = False
                        break
            if not ok:
                continue
            f[p] = c
            used[c] = True
            yield from rec(k + 1)
            used[c] = False
        f[p] = -1

    yield from rec(0)


def _hit(pat: IncidenceStructure, host: IncidenceStructure, image: Sequence[int]) -> SubconfigHit:
    lines = tuple(sorted(tuple(sorted(image[x] for x in L)) for L in pat.lines))
    return SubconfigHit(tuple(image), lines)


def _generic_hits(pat, host, limit, roots=None) -> list[SubconfigHit]:
    seen = {}
    for image in iter_embeddings(pat, host, roots):
        h = _hit(pat, host, image)
        old = seen.get(h.key)
        if old is None:
            seen[h.key] = h
            if limit is not None and len(seen) >= limit:
                break
        elif h.points < old.points:
            # smallest role tuple represents the occurrence, whatever the search order
            seen[h.key] = h
    return list(seen.values())


def _generic_chunk(args):
    pat, host, roots = args
    return _generic_hits(pat, host, None, roots)


def _sorted_hits(hits) -> list[SubconfigHit]:
    uniq: dict = {}
    for h in hits:
        if h.key not in uniq or h.points < uniq[h.key].points:
            uniq[h.key] = h
    return [uniq[k] for k in sorted(uniq)]


# -- structured searches -----------------------------------------------------------------

# Desargues role order matches the points of grassmannian(5):
# 12 13 14 15 23 24 25 34 35 45  ->  fab fca a1 a2 fbc b1 b2 c1 c2 O
_DES_ROLES = ("fab", "fca", "a1", "a2", "fbc", "b1", "b2", "c1", "c2", "O")


def perspective_pairs(s: IncidenceStructure) -> Iterator[dict[str, int]]:
    """Centrally perspective triangle pairs whose three focuses exist.

    Yields role dicts (O, a1, b1, c1, a2, b2, c2, fab, fbc, fca); each
    unordered pair of triangles with a given centre appears once.
    """
    rows = s.third_rows
    for O in range(s.v):
        through = s.lines_through[O]
        for k1, k2, k3 in combinations(through, 3):
            ends = [tuple(x for x in s.lines[k] if x != O) for k in (k1, k2, k3)]
            a1, a2 = ends[0]
            for (b1, b2), (c1, c2) in product((ends[1], ends[1][::-1]), (ends[2], ends[2][::-1])):
                fab = rows[a1][b1]
                if fab < 0 or fab != rows[a2][b2]:
                    continue
                fbc = rows[b1][c1]
                if fbc < 0 or fbc != rows[b2][c2]:
                    continue
                fca = rows[c1][a1]
                if fca < 0 or fca != rows[c2][a2]:
                    continue
                if not (is_triangle(s, (a1, b1, c1)) and is_triangle(s, (a2, b2, c2))):
                    continue
                roles = dict(O=O, a1=a1, b1=b1, c1=c1, a2=a2, b2=b2, c2=c2, fab=fab, fbc=fbc, fca=fca)
                if len(set(roles.values())) == 10:
                    yield roles


def _desargues_hits(s: IncidenceStructure, limit) -> list[SubconfigHit]:
    pat = grassmannian(5)
    seen = {}
    for roles in perspective_pairs(s):
        if s.is_line((roles["fab"], roles["fbc"], roles["fca"])):
            h = _hit(pat, s, [roles[r] for r in _DES_ROLES])
            seen.setdefault(h.key, h)
            if limit is not None and len(seen) >= limit:
                break
    return list(seen.values())


def _pasch_sets(pts: Sequence[int], lines: Sequence[tuple[int, int, int]]):
    for four in combinations(lines, 4):
        cover = {}
        for L in four:
            for x in L:
                cover[x] = cover.get(x, 0) + 1
        if len(cover) == 6 and all(c == 2 for c in cover.values()) and set(cover) == set(pts):
            yield four


def _k4closure_hits(s: IncidenceStructure, limit) -> list[SubconfigHit]:
    rows = s.third_rows
    nb = s.neighbours
    seen = {}
    for x1 in range(s.v):
        up1 = sorted(q for q in nb[x1] if q > x1)
        for x2 in up1:
            t12 = rows[x1][x2]
            c2 = [q for q in up1 if q > x2 and q in nb[x2] and q != t12]
            for x3 in c2:
                bad = {t12, rows[x1][x3], rows[x2][x3]}
                for x4 in c2:
                    if x4 <= x3 or x4 in bad or x4 not in nb[x3]:
                        continue
                    xs = (x1, x2, x3, x4)
                    ts = [rows[a][b] for a, b in combinations(xs, 2)]
                    if len(set(ts)) != 6 or set(ts) & set(xs):
                        continue
                    tset = set(ts)
                    inner = sorted({s.lines[k] for t in ts for k in s.lines_through[t] if set(s.lines[k]) <= tset})
                    for four in _pasch_sets(ts, inner):
                        edge_lines = [tuple(sorted((a, b, rows[a][b]))) for a, b in combinations(xs, 2)]
                        lines = tuple(sorted(edge_lines + list(four)))
                        h = SubconfigHit(xs + tuple(ts), lines)
                        seen.setdefault(h.key, h)
                        if limit is not None and len(seen) >= limit:
                            return list(seen.values())
    return list(seen.values())


def find_subconfig(
    host: IncidenceStructure, pattern: Pattern | str, limit: int | None = ALL, workers: int = 1
) -> list[SubconfigHit]:
    """Occurrences of a pattern in host, each unordered occurrence once, canonically sorted.

    With a ``limit`` the search stops after that many distinct occurrences;
    which ones are returned is still deterministic.
    """
    if isinstance(pattern, str):
        pattern = Pattern.parse(pattern)
    if pattern.kind == "desargues":
        hits = _desargues_hits(host, limit)
    elif pattern.kind == "k4closure":
        hits = _k4closure_hits(host, limit)
    else:
        pat = pattern.instance()
        if workers > 1 and limit is None and host.v > 1:
            chunks = [list(range(w, host.v, workers)) for w in range(workers)]
            with ProcessPoolExecutor(workers) as ex:
                hits = [h for part in ex.map(_generic_chunk, [(pat, host, c) for c in chunks]) for h in part]
        else:
            hits = _generic_hits(pat, host, limit)
    return _sorted_hits(hits)


def count_subconfig(host, pattern, workers: int = 1) -> int:
    return len(find_subconfig(host, pattern, workers=workers))


# -- Pasch counting -------------------------------------------------------------------------


def veblen_occurrences(s: IncidenceStructure) -> list[tuple[int, int, int, int, int, int]]:
    """All Pasch configurations as (p, a, b, c, d, x) with lines
    {p,a,b}, {p,c,d}, {a,c,x}, {b,d,x}; p is the least of the six points."""
    rows = s.third_rows
    out = []
    for p in range(s.v):
        through = s.lines_through[p]
        for k1, k2 in combinations(through, 2):
            a, b = (x for x in s.lines[k1] if x != p)
            c, d = (x for x in s.lines[k2] if x != p)
            if min(a, b, c, d) < p:
                continue
            for cc, dd in ((c, d), (d, c)):
                x = rows[a][cc]
                if x > p and x == rows[b][dd]:
                    out.append((p, a, b, cc, dd, x))
    return out


def veblen_counts(s: IncidenceStructure) -> list[int]:
    """Number of Pasch configurations through each point."""
    counts = [0] * s.v
    for occ in veblen_occurrences(s):
        for x in occ:
            counts[x] += 1
    return counts


# -- predicates ------------------------------------------------------------------------------


class PropertyResult(NamedTuple):
    holds: bool
    witness: object = None


def is_pasch_free(s: IncidenceStructure) -> PropertyResult:
    occ = veblen_occurrences(s)
    return PropertyResult(not occ, occ[0] if occ else None)


def is_anti_fano(s: IncidenceStructure) -> PropertyResult:
    """No quadrangle has three existing, collinear diagonal points.

    A quadrangle with two existing diagonal points spans a Pasch
    configuration, so only quadrangles inside Pasch configurations are tried.
    """
    rows = s.third_rows
    for p, a, b, c, d, x in veblen_occurrences(s):
        # the three noncollinear pairs of the Pasch; dropping one leaves a quadrangle
        for quad in ((p, a, d, x), (p, b, c, x), (a, b, c, d)):
            q0, q1, q2, q3 = quad
            diag = (rows[q0][q1], rows[q2][q3]), (rows[q0][q2], rows[q1][q3]), (rows[q0][q3], rows[q1][q2])
            if all(u >= 0 and u == w for u, w in diag):
                pts = tuple(u for u, _ in diag)
                if s.is_line(pts):
                    return PropertyResult(False, {"quadrangle": quad, "diagonal": pts})
    return PropertyResult(True)


def is_anti_desargues(s: IncidenceStructure) -> PropertyResult:
    """No centrally perspective triangle pair has three collinear focuses."""
    for roles in perspective_pairs(s):
        if s.is_line((roles["fab"], roles["fbc"], roles["fca"])):
            return PropertyResult(False, roles)
    return PropertyResult(True)


def is_miter_free(s: IncidenceStructure) -> PropertyResult:
    rows = s.third_rows
    for t in triangles(s):
        for a, b, c in ((t[0], t[1], t[2]), (t[1], t[2], t[0]), (t[2], t[0], t[1])):
            x = rows[a][rows[b][c]]
            if x >= 0 and x == rows[rows[a][b]][rows[a][c]]:
                return PropertyResult(False, {"apex": a, "triangle": t})
    return PropertyResult(True)


def is_moufangian(s: IncidenceStructure) -> PropertyResult:
    for t in triangles(s):
        if derived_triangle(s, t).kind != "line":
            return PropertyResult(False, t)
    return PropertyResult(True)


def polypappian_obstructions(m: int, v: int | None = None) -> list[Pattern]:
    """Cyclic-triangle patterns that an anti-m-polypappian structure must avoid."""
    out = []
    for m0 in range(3, m + 1):
        if v is not None and 3 * m0 > v:
            break
        if m % m0 == 0:
            out.append(Pattern("poly", m0, "id"))
        if m % (2 * m0) == 0:
            out.append(Pattern("poly", m0, "sigma0"))
        if m % (3 * m0) == 0:
            out.append(Pattern("poly", m0, "tau1"))
    return out


def is_anti_polypappian(s: IncidenceStructure, m: int) -> PropertyResult:
    if m < 3:
        raise ValueError("anti-m-polypappian needs m >= 3")
    for pat in polypappian_obstructions(m, s.v):
        hits = find_subconfig(s, pat, limit=1)
        if hits:
            return PropertyResult(False, {"pattern": pat.label, "points": hits[0].points})
    return PropertyResult(True)


def hexagons(s: IncidenceStructure) -> Iterator[tuple[tuple[int, ...], tuple[int, int, int] | None]]:
    """Hexagons p1..p6 with {p1,p3,p5} and {p2,p4,p6} disjoint lines, with
    their diagonal points when all three exist (else None)."""
    rows = s.third_rows
    for L1, L2 in combinations(s.lines, 2):
        if set(L1) & set(L2):
            continue
        for p1, p3, p5 in permutations(L1):
            for p2, p4, p6 in permutations(L2):
                q1 = rows[p1][p2]
                if q1 < 0 or q1 != rows[p4][p5]:
                    continue
                q2 = rows[p2][p3]
                if q2 < 0 or q2 != rows[p5][p6]:
                    continue
                q3 = rows[p3][p4]
                if q3 < 0 or q3 != rows[p6][p1]:
                    continue
                yield (p1, p2, p3, p4, p5, p6), (q1, q2, q3)


def has_pappus_diagonals(s: IncidenceStructure) -> PropertyResult:
    """Every hexagon inscribed in two lines whose diagonal points exist has them collinear."""
    for hexagon, diag in hexagons(s):
        if not s.is_line(diag):
            return PropertyResult(False, {"hexagon": hexagon, "diagonal": diag})
    return PropertyResult(True)


PROPERTIES = {
    "pasch-free": is_pasch_free,
    "moufangian": is_moufangian,
    "anti-fano": is_anti_fano,
    "anti-desargues": is_anti_desargues,
    "miter-free": is_miter_free,
    "pappus-diagonals": has_pappus_diagonals,
}


def check_property(s: IncidenceStructure, prop: str, m: int | None = None) -> PropertyResult:
    """Evaluate a named property; ``anti-polypappian`` needs m (or ``anti-4-polypappian``)."""
    hit = re.fullmatch(r"anti-(\d+)-polypappian", prop)
    if hit:
        return is_anti_polypappian(s, int(hit.group(1)))
    if prop == "anti-polypappian":
        if m is None:
            raise ValueError("anti-polypappian needs m")
        return is_anti_polypappian(s, m)
    try:
        return PROPERTIES[prop](s)
    except KeyError:
        raise ValueError(f"unknown property {prop!r}; known: {sorted(PROPERTIES)} and anti-<m>-polypappian")


# -- weave-specific analysis -------------------------------------------------------------------

TRIANGLE_TYPES = ("1", "2", "31", "3", "4", "1:3", "2:3")


def classify_triangle(host: IncidenceStructure, t: Sequence[int]) -> str:
    """Type of a triangle of a weaved structure, by base shape and weight pattern.

    ``1``/``2``: one weight over a base triangle/line; ``31``/``3``: weights
    (i, i, i-1) over a base line/triangle; ``4``: (i, i, i+1) over a base
    triangle; ``1:3``/``2:3``: three distinct weights (only when m = 3).
    """
    wv = weave_view(host)
    if not is_triangle(host, t):
        raise ValueError(f"{tuple(t)} is not a triangle")
    m = wv.m
    base_line = wv.base.is_line(wv.base_of[p] for p in t)
    w = [wv.weight[p] for p in t]
    distinct = set(w)
    if len(distinct) == 1:
        return "2" if base_line else "1"
    if len(distinct) == 3:
        return "2:3" if base_line else "1:3"
    pair = max(distinct, key=w.count)
    odd = (distinct - {pair}).pop()
    if odd == (pair - 1) % m:
        return "31" if base_line else "3"
    if odd == (pair + 1) % m and not base_line:
        return "4"
    raise ValueError(f"weights {w} cannot occur on a triangle of a weaved structure")


def type_number(tag: str) -> int:
    return TRIANGLE_TYPES.index(tag) + 1


def veblen_template_match(host: IncidenceStructure, pts: Sequence[int]) -> tuple | None:
    """(a, b, c, i) when the six points are (a,i),(b,i),(c,i+1),(a*c,i),(b*c,i),(a*b,i+1)
    for a base triangle {a,b,c} whose derived set is a base line."""
    wv = weave_view(host)
    base, m = wv.base, wv.m
    brow = base.third_rows
    target = {(wv.base_of[p], wv.weight[p]) for p in pts}
    bases = sorted({b for b, _ in target})
    weights = sorted({w for _, w in target})
    for a, b, c in permutations(bases, 3):
        if not is_triangle(base, (a, b, c)) or derived_triangle(base, (a, b, c)).kind != "line":
            continue
        for i in weights:
            j = (i + 1) % m
            tmpl = {(a, i), (b, i), (c, j), (brow[a][c], i), (brow[b][c], i), (brow[a][b], j)}
            if tmpl == target:
                return a, b, c, i
    return None


def veblen_census(host: IncidenceStructure) -> dict:
    """Pasch occurrences of a weaved structure and which of them fit the template."""
    occ = veblen_occurrences(host)
    bad = [o for o in occ if veblen_template_match(host, o) is None]
    return {"hits": len(occ), "conforming": len(occ) - len(bad), "nonconforming": bad}


def veblen_census_conforms(host: IncidenceStructure) -> bool:
    return not veblen_census(host)["nonconforming"]
