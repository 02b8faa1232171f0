import pytest

import oracles
from psts.constructions import (
    ag,
    catalog,
    convolve,
    grassmannian,
    miter,
    mobius_kantor,
    pappus,
    pg,
    poly_triangle,
    single_line,
    veblen,
    weave,
    weave_view,
)
from psts.core import derived_triangle, triangles
from psts.detect import (
    ALL,
    Pattern,
    check_property,
    classify_triangle,
    count_subconfig,
    find_subconfig,
    has_pappus_diagonals,
    is_anti_desargues,
    is_anti_fano,
    is_anti_polypappian,
    is_miter_free,
    is_pasch_free,
    perspective_pairs,
    polypappian_obstructions,
    type_number,
    veblen_census,
    veblen_census_conforms,
    veblen_counts,
    veblen_occurrences,
)
from psts.groups import AbelianGroup
from psts.morphisms import brute_force_automorphisms


def test_pattern_parse():
    assert Pattern.parse("pasch") == Pattern("veblen")
    assert Pattern.parse("poly(4, sigma0)") == Pattern("poly", 4, "sigma0")
    p = Pattern.parse("ag(2)")
    assert p.kind == "custom" and p.structure == ag(2)
    with pytest.raises(ValueError):
        Pattern("poly", 2, "id")
    with pytest.raises(ValueError):
        Pattern("poly", 4, "tau2")
    with pytest.raises(ValueError):
        Pattern("hexagram")


@pytest.mark.parametrize("host", ["veblen", "pg(2)", "pg(3)", "ag(2)", "pappus", "mobius-8_3"])
def test_pasch_search_against_oracle(host):
    s = catalog(host)
    want = oracles.pasch_sets(s)
    hits = find_subconfig(s, "veblen")
    assert {(frozenset(h.points), frozenset(h.lines)) for h in hits} == want
    assert len(veblen_occurrences(s)) == len(want)
    assert sum(veblen_counts(s)) == 6 * len(want)


def test_pasch_in_weave_against_oracle():
    W = weave(4, veblen())
    assert len(find_subconfig(W, "veblen")) == len(oracles.pasch_sets(W)) == 12


@pytest.mark.parametrize("pat,host", [
    ("veblen", "ag(2)"),
    ("veblen", "pappus"),
    ("miter", "ag(2)"),
    ("miter", "pappus"),
    ("miter", "pg(2)"),
    ("single-line", "veblen"),
])
def test_generic_counts_against_embedding_oracle(pat, host):
    P = Pattern.parse(pat)
    inst = P.instance()
    H = catalog(host)
    aut = len(brute_force_automorphisms(inst))
    assert oracles.count_embeddings(inst, H) % aut == 0
    assert count_subconfig(H, P) == oracles.count_embeddings(inst, H) // aut


def test_hits_are_embeddings_and_sorted():
    H = pg(3)
    hits = find_subconfig(H, "fano")
    assert len(hits) == 15
    inst = Pattern("fano").instance()
    for h in hits:
        assert len(set(h.points)) == 7
        assert all(H.is_line(h.role_map[x] for x in L) for L in inst.lines)
    assert hits == sorted(hits, key=lambda h: h.key)
    assert find_subconfig(H, "fano", limit=3) == find_subconfig(H, "fano", limit=3)
    assert len(find_subconfig(H, "fano", limit=3)) == 3


def test_veblen_in_itself():
    assert len(find_subconfig(veblen(), "veblen")) == 1


def test_workers_do_not_change_results():
    H = weave(3, pappus())
    assert find_subconfig(H, "miter", workers=1) == find_subconfig(H, "miter", workers=2)
    H = pg(3)
    assert find_subconfig(H, "veblen", workers=3) == find_subconfig(H, "veblen")


def test_desargues_structured_matches_generic():
    G = grassmannian(5)
    custom = Pattern.custom(G.renamed("g5"))
    for host in (G, convolve(G, AbelianGroup.cyclic(3), 0), weave(3, G)):
        structured = find_subconfig(host, "desargues")
        generic = find_subconfig(host, custom)
        assert {h.key for h in structured} == {h.key for h in generic}
    assert count_subconfig(G, "desargues") == 1
    assert count_subconfig(convolve(G, AbelianGroup.cyclic(3), 0), "desargues") == 3


def test_perspective_pairs_are_perspective():
    G = grassmannian(5)
    n = 0
    for r in perspective_pairs(G):
        O = r["O"]
        assert G.is_line((O, r["a1"], r["a2"])) and G.is_line((O, r["b1"], r["b2"])) and G.is_line((O, r["c1"], r["c2"]))
        assert G.is_line((r["a1"], r["b1"], r["fab"])) and G.is_line((r["a2"], r["b2"], r["fab"]))
        n += 1
    assert n > 0


def test_k4closure():
    G = grassmannian(5)
    assert count_subconfig(G, "k4closure") == 1
    for m in (4, 5):
        assert count_subconfig(weave(m, veblen()), "k4closure") == 0


def test_absence_in_small_weaves():
    assert count_subconfig(weave(4, ag(2)), "veblen") == 0
    assert count_subconfig(weave(3, pg(3)), "fano") == 0
    assert count_subconfig(weave(3, grassmannian(5)), "desargues") == 0
    assert len(find_subconfig(weave(3, pappus()), "pappus", limit=1)) == 1


def test_properties():
    assert is_anti_fano(weave(3, pg(3))).holds
    r = is_anti_fano(pg(2))
    assert not r.holds and pg(2).is_line(r.witness["diagonal"])
    assert is_anti_desargues(weave(4, grassmannian(5))).holds
    assert not is_anti_desargues(grassmannian(5)).holds
    assert check_property(veblen(), "moufangian").holds
    r = check_property(pappus(), "moufangian")
    assert not r.holds and r.witness in triangles(pappus())
    assert check_property(veblen(), "anti-4-polypappian").holds
    assert not is_miter_free(ag(2)).holds
    assert is_miter_free(pappus()).holds
    assert is_pasch_free(ag(2)).holds and not is_pasch_free(veblen()).holds
    with pytest.raises(ValueError):
        check_property(veblen(), "anti-polypappian")
    with pytest.raises(ValueError):
        check_property(veblen(), "shiny")


def test_miter_predicate_agrees_with_search():
    for name in ("ag(2)", "pappus", "pg(2)", "veblen", "mobius-8_3"):
        s = catalog(name)
        assert is_miter_free(s).holds == (count_subconfig(s, "miter") == 0)


def test_anti_fano_matches_quadrangle_scan():
    # every quadrangle of four points, no three collinear, with all three diagonal points
    from itertools import combinations

    def brute(s):
        for q in combinations(range(s.v), 4):
            if any(s.is_line(t) for t in combinations(q, 3)):
                continue
            pairs = [((q[0], q[1]), (q[2], q[3])), ((q[0], q[2]), (q[1], q[3])), ((q[0], q[3]), (q[1], q[2]))]
            diag = [oracles.third(s, *x) for x, y in pairs if oracles.third(s, *x) == oracles.third(s, *y)]
            if len(diag) == 3 and None not in diag and s.is_line(diag):
                return False
        return True

    for name in ("pg(2)", "ag(2)", "veblen", "pappus", "mobius-8_3"):
        s = catalog(name)
        assert is_anti_fano(s).holds == brute(s), name


def test_polypappian():
    labels = [p.label for p in polypappian_obstructions(12)]
    assert "poly(3,id)" in labels and "poly(6,sigma0)" in labels and "poly(4,tau1)" in labels
    assert "poly(5,id)" not in labels
    assert not is_anti_polypappian(pappus(), 3).holds
    assert not is_anti_polypappian(pappus(), 6).holds
    assert is_anti_polypappian(pappus(), 4).holds
    assert is_anti_polypappian(veblen(), 5).holds


def test_pappus_diagonals():
    for s in (pappus(), weave(3, pappus()), weave(3, pg(3))):
        assert has_pappus_diagonals(s).holds


def test_poly_inheritance():
    M = poly_triangle(4, "sigma0")
    for m in (3, 5):
        assert find_subconfig(weave(m, M), Pattern("poly", 4, "sigma0"), limit=1)
    assert find_subconfig(weave(4, pappus()), Pattern("poly", 3, "id"), limit=1)


def test_classify_examples():
    W = weave(4, veblen())
    m = 4
    L = veblen().lines[0]
    assert classify_triangle(W, tuple(a * m + 1 for a in L)) == "2"
    assert W.is_line((L[0] * m + 1, L[1] * m + 1, L[2] * m + 2))  # weights (i,i,i+1) over a line
    with pytest.raises(ValueError):
        classify_triangle(W, W.lines[0])
    assert type_number("2:3") == 7 and type_number("1") == 1


@pytest.mark.parametrize("m", [4, 5])
def test_no_mixed_types_when_m_not_3(m):
    W = weave(m, ag(2))
    wv = weave_view(W)
    for t in triangles(W):
        tag = classify_triangle(W, t)
        assert tag not in ("1:3", "2:3")
        ws = {wv.weight[p] for p in t}
        assert len(ws) == 1 or any({i, (i + 1) % m} == ws for i in range(m))


def test_type31_over_base_line():
    W = weave(4, single_line())
    t = (0, 4 + 0, 8 + 3)  # (a,0),(b,0),(c,3): weights (i,i,i-1)
    assert classify_triangle(W, t) == "31"
    assert derived_triangle(W, t).kind != "line"


def test_veblen_census():
    W = weave(4, veblen())
    c = veblen_census(W)
    assert c["hits"] == 12 and c["conforming"] == 12
    assert veblen_census_conforms(W)
    W = weave(3, ag(2))
    assert veblen_census(W)["hits"] == 0 and veblen_census_conforms(W)
    # brute force: 3m occurrences per Pasch of the base
    for M in (veblen(), pg(2)):
        for m in (4, 5):
            assert veblen_census(weave(m, M))["hits"] == 3 * m * len(oracles.pasch_sets(M))


def test_census_rejects_unweaved():
    with pytest.raises(Exception):
        veblen_census(pg(3))
