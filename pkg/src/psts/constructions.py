"""Builders: weaving, epsilon-weaving, convolution, cyclically inscribed
triangles, quotient by the base congruence, linear completion, the Bose
construction over C3^n, and a catalog of classical configurations.

Product points carry labels ``"base|weight"`` so that quotients and triangle
classification can read the structure back.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product

from .core import (
    IncidenceStructure,
    InvalidStructure,
    is_linear_space,
    noncollinearity_classes,
    validate,
)
from .groups import AbelianGroup, GroupElem


class ConstructionError(ValueError):
    pass


def product_label(base: str, weight: str | int) -> str:
    return f"{base}|{weight}"


def split_label(label: str) -> tuple[str, str]:
    base, sep, weight = label.rpartition("|")
    if not sep:
        raise ConstructionError(f"label {label!r} is not a product label")
    return base, weight


def _require_valid(s: IncidenceStructure):
    problems = validate(s)
    if problems:
        raise InvalidStructure(problems, s.name)


# -- weaving ------------------------------------------------------------------------


@dataclass(frozen=True)
class WeaveSpec:
    m: int
    base: IncidenceStructure
    epsilon: int = 1


def weave(m: int, base: IncidenceStructure, name: str | None = None) -> IncidenceStructure:
    """The m-weaved configuration: weights (i, i, i+1) in every rotation on each base line.

    Point ``(a, i)`` has index ``a*m + i``.
    """
    if m < 3:
        raise ConstructionError(f"weaving needs m >= 3, got {m}")
    _require_valid(base)
    lines = []
    for L in base.lines:
        for i in range(m):
            j = (i + 1) % m
            for odd in range(3):
                lines.append(tuple(x * m + (j if pos == odd else i) for pos, x in enumerate(L)))
    points = [product_label(a, i) for a in base.points for i in range(m)]
    return IncidenceStructure(tuple(points), tuple(lines), name or f"weave({m},{base.name})")


def weave_eps(m: int, epsilon: int, base: IncidenceStructure, name: str | None = None) -> IncidenceStructure:
    """Lines {(a,i),(b,i),(c,i+epsilon)}; epsilon must have order >= 3 in C_m."""
    if m < 3:
        raise ConstructionError(f"weaving needs m >= 3, got {m}")
    eps = epsilon % m
    order = AbelianGroup.cyclic(m).element_order((eps,))
    if order < 3:
        raise ConstructionError(f"epsilon={epsilon} has order {order} < 3 in C_{m}")
    _require_valid(base)
    lines = []
    for L in base.lines:
        for i in range(m):
            j = (i + eps) % m
            for odd in range(3):
                lines.append(tuple(x * m + (j if pos == odd else i) for pos, x in enumerate(L)))
    points = [product_label(a, i) for a in base.points for i in range(m)]
    return IncidenceStructure(tuple(points), tuple(lines), name or f"weave_eps({m},{eps},{base.name})")


# -- convolution ------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvolveSpec:
    base: IncidenceStructure
    group: AbelianGroup
    epsilon: GroupElem


def convolve(base: IncidenceStructure, group: AbelianGroup, epsilon=0, name: str | None = None) -> IncidenceStructure:
    """Lines {(x,a),(y,b),(z,c)} over base lines {x,y,z} with a+b+c = epsilon."""
    _require_valid(base)
    eps = group.elem(epsilon)
    elems = list(group.elements())
    pos = {g: k for k, g in enumerate(elems)}
    n = len(elems)
    lines = []
    for x, y, z in base.lines:
        for a, b in product(elems, repeat=2):
            c = group.sub(group.sub(eps, a), b)
            lines.append((x * n + pos[a], y * n + pos[b], z * n + pos[c]))
    points = [product_label(p, group.render(g)) for p in base.points for g in elems]
    return IncidenceStructure(
        tuple(points), tuple(lines), name or f"convolve({base.name},{group},{group.render(eps)})"
    )


# -- cyclically inscribed triangles ----------------------------------------------------

PERMS = {
    "id": (0, 1, 2),
    "tau1": (1, 2, 0),
    "tau2": (2, 0, 1),
    "sigma0": (0, 2, 1),
    "sigma1": (1, 0, 2),
    "sigma2": (2, 1, 0),
}


def parse_perm(gamma) -> tuple[int, int, int]:
    if isinstance(gamma, str):
        try:
            return PERMS[gamma]
        except KeyError:
            raise ConstructionError(f"unknown permutation {gamma!r}; use one of {sorted(PERMS)}")
    g = tuple(gamma)
    if sorted(g) != [0, 1, 2]:
        raise ConstructionError(f"{gamma!r} is not a permutation of C3")
    return g


def poly_triangle(m: int, gamma="id", name: str | None = None) -> IncidenceStructure:
    """m triangles each inscribed in the previous, the last one closed onto
    the first through the permutation gamma of C3 (a tuple or a name in PERMS).

    Point ``(a, i)`` with a in C3 has index ``a*m + i``.
    """
    if m < 3:
        raise ConstructionError(f"poly_triangle needs m >= 3, got {m}")
    g = parse_perm(gamma)
    lines = []
    for c in range(3):
        a, b = (x for x in range(3) if x != c)
        for i in range(m - 1):
            lines.append((a * m + i, b * m + i, c * m + i + 1))
        lines.append((a * m + m - 1, b * m + m - 1, g[c] * m))
    points = [product_label(a, i) for a in range(3) for i in range(m)]
    gname = gamma if isinstance(gamma, str) else "".join(map(str, g))
    s = IncidenceStructure(tuple(points), tuple(lines), name or f"poly({m},{gname})")
    _require_valid(s)
    return s


# -- quotient and completion --------------------------------------------------------------


@dataclass(frozen=True)
class ProductView:
    base: IncidenceStructure
    base_of: tuple[int, ...]  # point -> base point index
    weight: tuple[str, ...]  # point -> weight text


@lru_cache(maxsize=64)
def product_view(s: IncidenceStructure) -> ProductView:
    """Base structure and coordinates of a product-labelled structure."""
    if s.label_kind != "product":
        raise ConstructionError(f"{s!r} does not carry product labels")
    base_labels: list[str] = []
    pos: dict[str, int] = {}
    base_of, weights = [], []
    for p in s.points:
        base, w = split_label(p)
        if base not in pos:
            pos[base] = len(base_labels)
            base_labels.append(base)
        base_of.append(pos[base])
        weights.append(w)
    images = set()
    for L in s.lines:
        img = tuple(sorted({base_of[p] for p in L}))
        if len(img) != 3:
            raise ConstructionError(
                f"line {[s.points[p] for p in L]} collapses under the base congruence"
            )
        images.add(img)
    base = IncidenceStructure(tuple(base_labels), tuple(sorted(images)), f"quotient({s.name})")
    problems = validate(base)
    if problems:
        raise ConstructionError("base images do not form a PSTS: " + "; ".join(problems))
    return ProductView(base, tuple(base_of), tuple(weights))


def quotient_by_base(s: IncidenceStructure) -> IncidenceStructure:
    """Identify (a,i) with (b,j) iff a == b."""
    return product_view(s).base


@dataclass(frozen=True)
class WeaveView:
    base: IncidenceStructure
    base_of: tuple[int, ...]
    weight: tuple[int, ...]
    m: int


@lru_cache(maxsize=64)
def weave_view(s: IncidenceStructure) -> WeaveView:
    """Like product_view, but weights must be integers of one cyclic group C_m."""
    pv = product_view(s)
    try:
        weights = tuple(int(w) for w in pv.weight)
    except ValueError:
        raise ConstructionError(f"{s!r} has non-cyclic weights")
    m = len(set(weights))
    if sorted(set(weights)) != list(range(m)) or s.v != m * pv.base.v:
        raise ConstructionError(f"{s!r} is not labelled as S x C_m")
    return WeaveView(pv.base, pv.base_of, weights, m)


def linear_completion(s: IncidenceStructure, name: str | None = None) -> IncidenceStructure:
    """Add every noncollinearity class as a new line.

    Requires "equal or noncollinear" to be an equivalence whose classes all
    have 3 points; the result is checked to be a linear space.
    """
    classes = noncollinearity_classes(s)
    if classes is None:
        raise ConstructionError(f"noncollinearity is not an equivalence on {s!r}")
    if any(len(c) != 3 for c in classes):
        sizes = sorted({len(c) for c in classes})
        raise ConstructionError(f"noncollinearity classes have sizes {sizes}, need 3")
    out = IncidenceStructure(s.points, s.lines + tuple(classes), name or f"completion({s.name})")
    _require_valid(out)
    if not is_linear_space(out):
        raise ConstructionError(f"completion of {s!r} is not a linear space")
    return out


# -- catalog ------------------------------------------------------------------------------


def _vec_label(x) -> str:
    return "".join(map(str, x))


def ag(n: int) -> IncidenceStructure:
    """AG(n,3): points C3^n, lines {u, v, 2u+2v}."""
    if n < 1:
        raise ConstructionError("ag(n) needs n >= 1")
    pts = list(product(range(3), repeat=n))
    pos = {x: k for k, x in enumerate(pts)}
    lines = set()
    for u, w in combinations(pts, 2):
        z = tuple((2 * a + 2 * b) % 3 for a, b in zip(u, w))
        lines.add(tuple(sorted((pos[u], pos[w], pos[z]))))
    return IncidenceStructure(tuple(map(_vec_label, pts)), tuple(lines), f"ag({n})")


def pg(n: int) -> IncidenceStructure:
    """PG(n,2): nonzero vectors of GF(2)^(n+1), lines {u, v, u+v}."""
    if n < 1:
        raise ConstructionError("pg(n) needs n >= 1")
    pts = [x for x in product(range(2), repeat=n + 1) if any(x)]
    pos = {x: k for k, x in enumerate(pts)}
    lines = set()
    for u, w in combinations(pts, 2):
        z = tuple(a ^ b for a, b in zip(u, w))
        lines.add(tuple(sorted((pos[u], pos[w], pos[z]))))
    return IncidenceStructure(tuple(map(_vec_label, pts)), tuple(lines), f"pg({n})")


def slit(n: int) -> IncidenceStructure:
    """AG(n,3) without the lines inside the hyperplanes x_n = const."""
    if n < 2:
        raise ConstructionError("slit(n) needs n >= 2")
    a = ag(n)
    lines = [L for L in a.lines if len({a.points[p][-1] for p in L}) != 1]
    return IncidenceStructure(a.points, tuple(lines), f"slit({n})")


def grassmannian(n: int) -> IncidenceStructure:
    """2-subsets of {1..n} as points, 3-subsets as lines."""
    if n < 3:
        raise ConstructionError("grassmannian(n) needs n >= 3")
    sep = "" if n < 10 else ","
    pairs = list(combinations(range(1, n + 1), 2))
    pos = {p: k for k, p in enumerate(pairs)}
    lines = [tuple(pos[p] for p in combinations(t, 2)) for t in combinations(range(1, n + 1), 3)]
    labels = [f"{i}{sep}{j}" for i, j in pairs]
    return IncidenceStructure(tuple(labels), tuple(lines), f"grassmannian({n})")


def single_line() -> IncidenceStructure:
    return IncidenceStructure.build("abc", [(0, 1, 2)], "single-line")


def veblen() -> IncidenceStructure:
    """Pasch configuration on a,b,c,d,p,q with p,q (and a,d and b,c) noncollinear."""
    return IncidenceStructure.from_label_lines(
        [("p", "a", "c"), ("p", "b", "d"), ("q", "a", "b"), ("q", "c", "d")],
        "veblen",
        points="abcdpq",
    )


def pappus() -> IncidenceStructure:
    """Hexagon A1 B2 A3 B1 A2 B3 on two lines, with its three diagonal points C."""
    blocks = [
        ("A1", "A2", "A3"),
        ("B1", "B2", "B3"),
        ("A2", "B3", "C1"),
        ("A3", "B2", "C1"),
        ("A1", "B3", "C2"),
        ("A3", "B1", "C2"),
        ("A1", "B2", "C3"),
        ("A2", "B1", "C3"),
        ("C1", "C2", "C3"),
    ]
    return IncidenceStructure.from_label_lines(blocks, "pappus")


def miter() -> IncidenceStructure:
    """Points a,b,c and their products; apex a with a*(b*c) = (a*b)*(a*c) =: x."""
    blocks = [
        ("a", "b", "ab"),
        ("a", "c", "ac"),
        ("b", "c", "bc"),
        ("a", "bc", "x"),
        ("ab", "ac", "x"),
    ]
    return IncidenceStructure.from_label_lines(blocks, "miter", points=["a", "b", "c", "ab", "ac", "bc", "x"])


def mobius_kantor() -> IncidenceStructure:
    """AG(2,3) with the point 00 and its four lines removed: the 8_3 configuration."""
    a = ag(2)
    keep = [p for p in range(a.v) if a.points[p] != "00"]
    pos = {p: k for k, p in enumerate(keep)}
    lines = [tuple(pos[x] for x in L) for L in a.lines if 0 not in L]
    return IncidenceStructure(tuple(a.points[p] for p in keep), tuple(lines), "mobius-8_3")


CATALOG = {
    "single-line": lambda: single_line(),
    "veblen": lambda: veblen(),
    "pappus": lambda: pappus(),
    "ag": ag,
    "pg": pg,
    "slit": slit,
    "grassmannian": grassmannian,
    "miter": lambda: miter(),
    "mobius-8_3": lambda: mobius_kantor(),
    # convenience aliases for pattern-sized structures
    "fano": lambda: pg(2).renamed("fano"),
    "desargues": lambda: grassmannian(5).renamed("desargues"),
}


def catalog(name: str, *params: int) -> IncidenceStructure:
    """Named structure; parametric families take n, e.g. ``catalog("ag", 2)``.

    Also accepts the compact spelling ``catalog("ag(2)")``.
    """
    name = name.strip().lower()
    if "(" in name and name.endswith(")"):
        name, arg = name[:-1].split("(", 1)
        params = tuple(int(x) for x in arg.split(",") if x.strip()) + params
    try:
        builder = CATALOG[name]
    except KeyError:
        raise ConstructionError(f"unknown catalog structure {name!r}; known: {sorted(CATALOG)}")
    try:
        s = builder(*params)
    except TypeError:
        raise ConstructionError(f"bad parameters {params!r} for {name!r}")
    _require_valid(s)
    return s


def bose(n: int) -> IncidenceStructure:
    """Bose construction on C3^n x C3 with the quasigroup x.y = 2(x+y).

    Labels and point order match ``linear_completion(weave(3, ag(n)))``.
    """
    if n < 1:
        raise ConstructionError("bose(n) needs n >= 1")
    xs = list(product(range(3), repeat=n))
    pos = {x: k for k, x in enumerate(xs)}
    lines = set()
    for x in xs:
        lines.add((pos[x] * 3, pos[x] * 3 + 1, pos[x] * 3 + 2))
    for x, y in permutations(xs, 2):
        z = tuple((2 * (a + b)) % 3 for a, b in zip(x, y))
        for i in range(3):
            lines.add(tuple(sorted((pos[x] * 3 + i, pos[y] * 3 + i, pos[z] * 3 + (i + 1) % 3))))
    points = [product_label(_vec_label(x), i) for x in xs for i in range(3)]
    s = IncidenceStructure(tuple(points), tuple(lines), f"bose({n})")
    _require_valid(s)
    return s
