"""Runnable verification suite: one check per claim about weaved structures.

Each check is deterministic and exact. A check returns a short details
string and raises ``CheckFailed`` (or any exception) when a claim does not
hold; ``run_suite`` turns that into a report.
"""

from __future__ import annotations

import time
import traceback
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable

from .constructions import (
    ag,
    bose,
    catalog,
    convolve,
    grassmannian,
    linear_completion,
    miter,
    mobius_kantor,
    pappus,
    pg,
    poly_triangle,
    quotient_by_base,
    single_line,
    slit,
    veblen,
    weave,
    weave_eps,
    weave_view,
)
from .core import (
    connected_components,
    derived_triangle,
    induced,
    is_anticlique_hyperplane,
    is_linear_space,
    maximal_anticliques,
    noncollinearity_classes,
    params,
    subspace_closure,
    third_point,
    triangles,
)
from .detect import (
    Pattern,
    classify_triangle,
    count_subconfig,
    find_subconfig,
    is_anti_desargues,
    is_anti_fano,
    is_anti_polypappian,
    is_miter_free,
    is_pasch_free,
    veblen_census,
)
from .groups import AbelianGroup, cyclic_automorphisms
from .morphisms import (
    NOT_PRODUCT,
    are_isomorphic,
    automorphism_group,
    brute_force_automorphisms,
    closure_profile,
    decompose_automorphism,
    embedding,
    enumerate_group,
    induced_base_map,
    is_automorphism,
    isomorphism,
    permutes_line_fibres,
    product_automorphism,
)

C = AbelianGroup.cyclic


class CheckFailed(AssertionError):
    pass


def expect(cond, msg: str):
    if not cond:
        raise CheckFailed(msg)


@dataclass
class CheckResult:
    id: str
    status: str  # pass | fail | skip
    details: str
    elapsed: float


@dataclass
class VerifyReport:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.results)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def lines(self) -> list[str]:
        return [f"{r.status.upper():4} {r.id:32} {r.elapsed:7.2f}s  {r.details}" for r in self.results]

    def junit(self) -> str:
        suite = ET.Element(
            "testsuite",
            name="psts-verify",
            tests=str(len(self.results)),
            failures=str(sum(r.status == "fail" for r in self.results)),
            skipped=str(sum(r.status == "skip" for r in self.results)),
            time=f"{sum(r.elapsed for r in self.results):.3f}",
        )
        for r in self.results:
            case = ET.SubElement(suite, "testcase", classname="psts.suite", name=r.id, time=f"{r.elapsed:.3f}")
            if r.status == "fail":
                ET.SubElement(case, "failure", message=r.details.splitlines()[0] if r.details else "")
            elif r.status == "skip":
                ET.SubElement(case, "skipped", message=r.details)
            else:
                ET.SubElement(case, "system-out").text = r.details
        ET.indent(suite)
        return ET.tostring(suite, encoding="unicode") + "\n"


# -- corpus ---------------------------------------------------------------------------------


def catalog_bases():
    return [
        single_line(),
        veblen(),
        pappus(),
        ag(2),
        pg(2),
        pg(3),
        slit(2),
        grassmannian(5),
        miter(),
        mobius_kantor(),
    ]


ABSENCE_BASES = ("veblen", "pappus", "pg(3)", "grassmannian(5)", "ag(2)")


def _iso(a, b, what=""):
    expect(are_isomorphic(a, b), f"{what or a.name} !~ {b.name}")


# -- checks ---------------------------------------------------------------------------------


def check_pappus_identifications():
    w = weave(3, single_line())
    others = [poly_triangle(3, "id"), convolve(single_line(), C(3), 0), slit(2), pappus()]
    for o in others:
        _iso(w, o)
    return "weave(3,line) ~ poly(3,id) ~ conv(line,C3,0) ~ slit(2) ~ pappus"


def check_parameter_law():
    groups = [C(2), C(3), C(4), AbelianGroup((2, 2)), C(9), AbelianGroup((3, 3))]
    n = 0
    for M in catalog_bases():
        deg = M.degrees
        for m in (3, 4, 5):
            W = weave(m, M)
            wv = weave_view(W)
            expect(W.v == m * M.v and W.b == 3 * m * M.b, f"weave({m},{M.name}) has {W.v},{W.b}")
            expect(all(W.degrees[p] == 3 * deg[wv.base_of[p]] for p in range(W.v)), f"degrees of weave({m},{M.name})")
            n += 1
        for G in groups:
            g = G.order
            X = convolve(M, G, G.zero())
            expect(X.v == g * M.v and X.b == g * g * M.b, f"{X.name} has {X.v},{X.b}")
            expect(all(X.degrees[p] == g * deg[p // g] for p in range(X.v)), f"degrees of {X.name}")
            n += 1
        pm = params(M)
        if pm.regular:
            expect(params(weave(3, M)).r == 3 * pm.r, f"regularity of weave(3,{M.name})")
    return f"{n} products over {len(catalog_bases())} bases"


def _type7_union(s, t):
    d1 = derived_triangle(s, t)
    u = set(t) | set(d1.points)
    if d1.kind == "triangle":
        u |= set(derived_triangle(s, d1.points).points)
    return frozenset(u)


def check_collinearity_and_triangles():
    M = ag(2)
    W = weave(4, M)
    wv = weave_view(W)
    for p, q in combinations(range(W.v), 2):
        a, b = wv.base_of[p], wv.base_of[q]
        d = (wv.weight[q] - wv.weight[p]) % 4
        rule = a != b and bool(M.collinear[a, b]) and d in (0, 1, 3)
        expect(bool(W.collinear[p, q]) == rule, f"collinearity of {W.points[p]}, {W.points[q]}")
    counts = {}
    for m in (4, 5):
        for base in (veblen(), ag(2), pappus()):
            s = weave(m, base)
            tags = Counter(classify_triangle(s, t) for t in triangles(s))
            expect(not (set(tags) & {"1:3", "2:3"}), f"types 6-7 in weave({m},{base.name})")
            expect(sum(tags.values()) == len(triangles(s)), "classification incomplete")
            counts[s.name] = sum(tags.values())
    n7 = 0
    for base in (veblen(), ag(2), pappus()):
        s = weave(3, base)
        tris = triangles(s)
        tags = {t: classify_triangle(s, t) for t in tris}
        type2 = {_type7_union(s, t) for t in tris if tags[t] == "2"}
        for t in tris:
            if tags[t] == "2:3":
                n7 += 1
                expect(_type7_union(s, t) in type2, f"type-7 triangle {t} of {s.name} unmatched")
    return f"pair rule on {W.v} points; {sum(counts.values())} triangles typed for m=4,5; {n7} type-7 matched"


def check_pasch_free_preservation():
    for m in (3, 4):
        W = weave(m, ag(2))
        expect(count_subconfig(W, "veblen") == 0, f"Pasch in {W.name}")
    B = bose(2)
    expect(is_pasch_free(B).holds, "bose(2) has a Pasch")
    for m in (3, 4):
        W = weave(m, B)
        expect(is_pasch_free(W).holds, f"Pasch in {W.name}")
    return "weave(3|4, ag(2)) and weave(3|4, bose(2)) Pasch-free"


def check_absence_theorems():
    pats = ["fano", "desargues", "miter", Pattern.custom(ag(2)), Pattern.custom(mobius_kantor())]
    n = 0
    for name in ABSENCE_BASES:
        M = catalog(name)
        for m in (3, 4):
            W = weave(m, M)
            for pat in pats + (["k4closure"] if m > 3 else []):
                hits = find_subconfig(W, pat, limit=1)
                label = pat if isinstance(pat, str) else pat.label
                expect(not hits, f"{label} in {W.name}")
                n += 1
            expect(is_anti_fano(W).holds, f"{W.name} not anti-Fano")
            expect(is_anti_desargues(W).holds, f"{W.name} not anti-Desarguesian")
            expect(is_miter_free(W).holds, f"{W.name} has a miter")
    return f"{n} pattern searches empty; anti-Fano and anti-Desargues on 10 hosts"


def check_veblen_census():
    out = []
    for M in (veblen(), pg(3)):
        W = weave(4, M)
        c = veblen_census(W)
        expect(c["hits"] > 0, f"no Pasch in {W.name}")
        expect(not c["nonconforming"], f"{len(c['nonconforming'])} off-template Pasch in {W.name}")
        expect(c["hits"] == count_subconfig(W, "veblen"), "census disagrees with generic search")
        out.append(f"{W.name}: {c['hits']}")
    return "all hits on template; " + ", ".join(out)


def check_convolution_facts():
    n = 0
    for M in (single_line(), veblen()):
        _iso(convolve(M, C(2), 0), convolve(M, C(2), 1))
        for m in (6, 9):
            for eps in range(m):
                base = convolve(M, C(m), eps)
                _iso(base, convolve(M, C(m), (eps + 3) % m))
                for u in cyclic_automorphisms(m):
                    if u != 1:
                        _iso(base, convolve(M, C(m), u * eps % m))
                        n += 1
        n += 1
    for M in (single_line(), veblen(), ag(2)):
        w = weave(3, M)
        _iso(w, convolve(M, C(3), 1))
        _iso(w, convolve(M, C(3), 2))
    for M in (single_line(), veblen()):
        _iso(weave(3, weave(4, M)), weave(4, weave(3, M)))
        for G, eps in ((C(2), 1), (C(4), 1), (C(3), 2)):
            _iso(weave(3, convolve(M, G, eps)), convolve(weave(3, M), G, eps))
    return f"{n} unit-multiplier pairs; eps+3e, C2, C3 and commutation cases isomorphic"


def check_hyperplane_theorems():
    bases = [veblen(), pappus(), slit(2), poly_triangle(4, "sigma0"), poly_triangle(4, "id")]
    lifted = 0
    for M in bases:
        hyps = [H for H in maximal_anticliques(M) if is_anticlique_hyperplane(M, H)]
        expect(hyps, f"{M.name} has no anti-clique hyperplane")
        _iso(weave(3, M), convolve(M, C(3), 0))
        for m in (3, 4, 5):
            W = weave(m, M)
            for H in hyps:
                lift = [a * m + i for a in H for i in range(m)]
                expect(is_anticlique_hyperplane(W, lift), f"lift of {H} into {W.name}")
                lifted += 1
    return f"weave(3,M) ~ conv(M,C3,0) for {len(bases)} bases; {lifted} hyperplanes lifted"


def check_grassmannian_separation():
    G = grassmannian(5)
    a, b = weave(3, G), convolve(G, C(3), 0)
    da, db = count_subconfig(a, "desargues"), count_subconfig(b, "desargues")
    expect(da != db, "Desargues counts agree")
    expect(isomorphism(a, b) is None, "structures are isomorphic")
    return f"Desargues subconfigurations: {da} vs {db}; not isomorphic"


def _full_decomposition(M, m):
    W = weave(m, M)
    group = automorphism_group(W)
    base_order = automorphism_group(M).order
    expect(group.order == m * base_order, f"|Aut({W.name})| = {group.order} != {m}*{base_order}")
    elems = enumerate_group([g.map for g in group.generators], W.v)
    expect(len(elems) == group.order, "generators do not close to the stated order")
    decs = {}
    for F in elems:
        d = decompose_automorphism(W, F)
        expect(d is not NOT_PRODUCT, f"non-product automorphism of {W.name}")
        f, u = d
        expect(product_automorphism(W, f, u).map == F, "decomposition does not rebuild F")
        expect(permutes_line_fibres(W, F), "line fibres not permuted")
        decs[(f.map, u)] = F
    expect(len(decs) == group.order, "decomposition not injective")
    # homomorphism on the generators
    gens = [g.map for g in group.generators]
    for F, G in zip(gens, gens[1:] + gens[:1]):
        FG = tuple(F[x] for x in G)
        (f, u), (g, v) = decompose_automorphism(W, F), decompose_automorphism(W, G)
        expect(decompose_automorphism(W, FG) == (f.compose(g), (u + v) % m), "not a homomorphism")
    return group.order


def check_automorphism_theorem():
    expect(len(brute_force_automorphisms(veblen())) == 24, "|Aut(veblen)| != 24")
    expect(len(brute_force_automorphisms(pappus())) == 108, "|Aut(pappus)| != 108")
    out = []
    for M, m in ((veblen(), 4), (veblen(), 5), (pappus(), 4)):
        expect(is_anti_polypappian(M, m).holds, f"{M.name} is not anti-{m}-polypappian")
        out.append(f"{M.name},{m}: {_full_decomposition(M, m)}")
    return "; ".join(out)


def m3_table_map(W):
    """The explicit non-product automorphism of weave(3, veblen)."""
    wv = weave_view(W)
    on_pq = {0: 0, 1: 2, 2: 1}
    on_abcd = {0: 1, 1: 0, 2: 2}
    idx = {(wv.base_of[p], wv.weight[p]): p for p in range(W.v)}
    F = []
    for p in range(W.v):
        a, i = wv.base_of[p], wv.weight[p]
        table = on_pq if wv.base.points[a] in ("p", "q") else on_abcd
        F.append(idx[(a, table[i])])
    return tuple(F)


def check_m3_exception():
    W = weave(3, veblen())
    F = m3_table_map(W)
    expect(is_automorphism(W, F), "table map is not an automorphism")
    f = induced_base_map(W, F)
    expect(f is not None and f.map == tuple(range(6)), "alpha_F is not the identity")
    expect(decompose_automorphism(W, F) is NOT_PRODUCT, "table map decomposes")
    order = automorphism_group(W).order
    expect(order > 72, f"|Aut| = {order}")
    return f"F is a non-product automorphism; |Aut(weave(3,veblen))| = {order} > 72"


def check_quotient_and_completion():
    n = 0
    for M in catalog_bases():
        for m in (3, 4, 5):
            Q = quotient_by_base(weave(m, M))
            expect(Q == M, f"quotient of weave({m},{M.name}) differs from the base")
            n += 1
    W = weave(3, ag(2))
    cliques = maximal_anticliques(W)
    fibres = sorted(tuple(a * 3 + i for i in range(3)) for a in range(9))
    expect(sorted(cliques) == fibres, "maximal anti-cliques are not the fibres")
    expect(noncollinearity_classes(W) is not None, "noncollinearity is not an equivalence")
    K = linear_completion(W)
    expect(is_linear_space(K) and K.b == 117, f"completion has {K.b} lines")
    expect(is_pasch_free(K).holds, "completion has a Pasch")
    expect(embedding(miter(), K) is not None, "no miter in the completion")
    return f"{n} quotients recover the base; completion: 117 lines, Pasch-free, contains a miter"


def check_bose_equivalence():
    B = bose(2)
    K = linear_completion(weave(3, ag(2)))
    expect(B == K and B.points == K.points, "bose(2) differs from the completion")
    _iso(bose(1), ag(2))
    return "bose(2) equals the completion label for label; bose(1) ~ ag(2)"


def check_non_embeddability():
    W = weave(3, ag(2))
    P = W.index
    D = [P["00|0"], P["10|0"], P["01|0"]]
    d1 = derived_triangle(W, D)
    expect(d1.kind == "triangle", f"first derived set is a {d1.kind}")
    expect({W.points[p] for p in d1.points} == {"20|1", "02|1", "22|1"}, "first derived set")
    d2 = derived_triangle(W, d1.points)
    expect(d2.kind == "triangle", f"second derived set is a {d2.kind}")
    expect({W.points[p] for p in d2.points} == {"11|2", "12|2", "21|2"}, "second derived set")
    x = third_point(W, P["01|0"], P["20|1"])
    expect(x is not None and W.points[x] == "12|0", f"third point is {x}")
    expect(x not in set(D) | set(d1.points) | set(d2.points), "third point inside the series")
    closure = subspace_closure(W, D)
    expect(closure == frozenset(range(W.v)), f"closure has {len(closure)} points")
    K = linear_completion(W)
    A = ag(3)
    expect({n for n, _ in closure_profile(A)} == {9}, "AG(3,3) triangle closures not all planes")
    big = max(n for n, _ in closure_profile(K))
    expect(big > 9, "completion has only planar triangle closures")
    expect(not are_isomorphic(K, A), "completion ~ AG(3,3)")
    return f"series and third point as stated; closure 27 points; completion has a {big}-point closure, AG(3,3) only 9"


def check_eps_weaving_components():
    E = weave_eps(6, 2, single_line())
    comps = connected_components(E)
    expect(len(comps) == 2, f"{len(comps)} components")
    for c in comps:
        _iso(induced(E, c), weave(3, single_line()), "component")
    return "2 components, each ~ weave(3, single-line)"


def check_poly_triangle_classes():
    names = ["id", "tau1", "tau2", "sigma0", "sigma1", "sigma2"]
    structs = {g: poly_triangle(4, g) for g in names}
    classes: list[list[str]] = []
    for g in names:
        for cls in classes:
            if are_isomorphic(structs[cls[0]], structs[g]):
                cls.append(g)
                break
        else:
            classes.append([g])
    got = sorted(sorted(c) for c in classes)
    want = sorted([["id"], ["tau1", "tau2"], ["sigma0", "sigma1", "sigma2"]])
    expect(got == want, f"classes {got}")
    expect(find_subconfig(weave(4, pappus()), Pattern("poly", 3, "id"), limit=1), "no poly(3,id) in weave(4,pappus)")
    return "classes " + " | ".join(",".join(c) for c in got) + "; weave(4,pappus) contains poly(3,id)"


CHECKS: dict[str, tuple[Callable[[], str], str]] = {
    "pappus-identifications": (check_pappus_identifications, "four constructions of the Pappus configuration agree"),
    "parameter-law": (check_parameter_law, "point, line and degree counts of weave and convolve"),
    "collinearity-and-triangles": (check_collinearity_and_triangles, "pair rule and triangle types in weaved structures"),
    "pasch-free-preservation": (check_pasch_free_preservation, "weaving keeps Pasch-free bases Pasch-free"),
    "absence-theorems": (check_absence_theorems, "no Fano, Desargues, miter, K4-closure, AG(2,3) or 8_3 in weaves"),
    "veblen-census": (check_veblen_census, "every Pasch of a weave sits on the six-point template"),
    "convolution-facts": (check_convolution_facts, "isomorphisms between convolutions and weaves"),
    "hyperplane-theorems": (check_hyperplane_theorems, "anti-clique hyperplanes: weave(3,M) ~ conv(M,C3,0), lifting"),
    "grassmannian-separation": (check_grassmannian_separation, "weave(3,G5) and conv(G5,C3,0) differ"),
    "automorphism-theorem": (check_automorphism_theorem, "Aut(weave(m,M)) = Aut(M) x C_m for m > 3"),
    "m3-exception": (check_m3_exception, "a non-product automorphism of weave(3,veblen)"),
    "quotient-and-completion": (check_quotient_and_completion, "fibre quotient, anti-cliques and linear completion"),
    "bose-equivalence": (check_bose_equivalence, "Bose over C3^n is the completed weave of AG(n,3)"),
    "non-embeddability": (check_non_embeddability, "triangle series certificate in weave(3,AG(2,3))"),
    "eps-weaving-components": (check_eps_weaving_components, "components of an epsilon-weave"),
    "poly-triangle-classes": (check_poly_triangle_classes, "three classes of cyclically inscribed 4-chains"),
}


def run_one(check_id: str) -> CheckResult:
    try:
        fn, _ = CHECKS[check_id]
    except KeyError:
        raise KeyError(f"unknown check {check_id!r}; known: {', '.join(CHECKS)}") from None
    t0 = time.perf_counter()
    try:
        details, status = fn(), "pass"
    except CheckFailed as e:
        details, status = str(e), "fail"
    except Exception as e:  # a crash is a failure, not a pass
        details, status = f"{type(e).__name__}: {e}\n{traceback.format_exc()}", "fail"
    return CheckResult(check_id, status, details, time.perf_counter() - t0)


def run_suite(scope: str | Iterable[str] = "all", progress: Callable[[CheckResult], None] | None = None) -> VerifyReport:
    """Run every check (``scope="all"``) or the listed ids, in suite order."""
    ids = list(CHECKS) if scope == "all" else list(scope)
    unknown = [i for i in ids if i not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check ids {unknown}; known: {', '.join(CHECKS)}")
    report = VerifyReport()
    for i in ids:
        r = run_one(i)
        report.results.append(r)
        if progress:
            progress(r)
    return report
