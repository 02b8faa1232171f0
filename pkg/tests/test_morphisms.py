import random

import pytest

import oracles
from psts.constructions import (
    ag,
    catalog,
    convolve,
    grassmannian,
    linear_completion,
    miter,
    mobius_kantor,
    pappus,
    pg,
    poly_triangle,
    single_line,
    veblen,
    weave,
)
from psts.core import IncidenceStructure
from psts.detect import veblen_counts
from psts.groups import AbelianGroup
from psts.morphisms import (
    NOT_PRODUCT,
    Morphism,
    MorphismError,
    are_isomorphic,
    automorphism_group,
    brute_force_automorphisms,
    decompose_automorphism,
    embedding,
    enumerate_group,
    identity,
    induced_base_map,
    invariants,
    is_automorphism,
    is_embedding,
    is_isomorphism,
    isomorphism,
    permutes_line_fibres,
    product_automorphism,
)
from psts.suite import m3_table_map

C = AbelianGroup.cyclic


def shuffled(s, seed):
    rng = random.Random(seed)
    perm = list(range(s.v))
    rng.shuffle(perm)
    lines = [tuple(perm[x] for x in L) for L in s.lines]
    labels = [None] * s.v
    for p, x in enumerate(perm):
        labels[x] = f"x{p}"
    return IncidenceStructure(tuple(labels), tuple(lines), s.name + "~"), perm


@pytest.mark.parametrize("name", ["veblen", "pappus", "ag(2)", "pg(3)", "grassmannian(5)", "miter", "mobius-8_3"])
def test_isomorphism_of_shuffled_copy(name):
    s = catalog(name)
    t, _ = shuffled(s, 7)
    f = isomorphism(s, t)
    assert f is not None and is_isomorphism(s, t, f.map)
    g = isomorphism(t, s)
    assert is_isomorphism(s, s, g.compose(f).map)


def test_identity_isomorphism():
    s = weave(3, veblen())
    f = isomorphism(s, s)
    assert f is not None and is_automorphism(s, f.map)
    assert identity(s).map == tuple(range(s.v))


@pytest.mark.parametrize("a,b", [
    ("pappus", "slit(2)"),
    ("pappus", "mobius-8_3"),
    ("pg(2)", "ag(2)"),
    ("veblen", "miter"),
])
def test_small_decisions_match_permutation_oracle(a, b):
    A, B = catalog(a), catalog(b)
    if A.v == B.v and A.v <= 9:
        assert are_isomorphic(A, B) == oracles.isomorphic_by_permutation(A, B)
    else:
        assert not are_isomorphic(A, B)


def test_poly3_classes_match_oracle():
    names = ["id", "tau1", "tau2", "sigma0", "sigma1", "sigma2"]
    for x in names:
        for y in names:
            a, b = poly_triangle(3, x), poly_triangle(3, y)
            assert are_isomorphic(a, b) == oracles.isomorphic_by_permutation(a, b), (x, y)


def test_witness_examples():
    assert isomorphism(weave(3, single_line()), poly_triangle(3, "id")) is not None
    assert isomorphism(weave(3, veblen()), convolve(veblen(), C(3), 0)) is not None
    assert isomorphism(weave(3, grassmannian(5)), convolve(grassmannian(5), C(3), 0)) is None


def test_isomorphism_is_transitive_on_witnesses():
    a = weave(3, veblen())
    b = convolve(veblen(), C(3), 0)
    c = convolve(veblen(), C(3), 1)
    f, g = isomorphism(a, b), isomorphism(b, c)
    h = g.compose(f)
    assert is_isomorphism(a, c, h.map)


def test_invariants_prefilter():
    assert invariants(pappus()) == invariants(pappus().relabeled())
    assert invariants(linear_completion(weave(3, ag(2)))) != invariants(ag(3))


def test_embedding():
    assert embedding(weave(4, single_line()), convolve(single_line(), C(4), 0)) is None
    K = linear_completion(weave(3, ag(2)))
    f = embedding(miter(), K)
    assert f is not None and is_embedding(miter(), K, f.map)
    e = embedding(veblen(), veblen())
    assert e is not None and is_embedding(veblen(), veblen(), e.map)
    assert embedding(ag(2), veblen()) is None


def test_embedding_negative_cases():
    for M in (veblen(), pappus()):
        for m in (3, 4):
            W = weave(m, M)
            assert embedding(ag(2), W) is None
            assert embedding(mobius_kantor(), W) is None


@pytest.mark.parametrize("name", ["single-line", "veblen", "miter", "pappus", "mobius-8_3", "pg(2)"])
def test_automorphism_order_against_brute_force(name):
    s = catalog(name)
    g = automorphism_group(s)
    brute = brute_force_automorphisms(s)
    assert g.order == len(brute)
    assert sorted(x.map for x in g.elements()) == sorted(brute)
    for gen in g.generators:
        assert is_automorphism(s, gen.map)


def test_brute_force_matches_permutation_oracle():
    for s in (single_line(), veblen(), miter()):
        assert len(brute_force_automorphisms(s)) == oracles.automorphism_count(s)


def test_known_orders():
    assert automorphism_group(single_line()).order == 6
    assert automorphism_group(veblen()).order == 24
    assert automorphism_group(weave(4, veblen())).order == 96
    assert automorphism_group(ag(2)).order == 432
    assert automorphism_group(pg(3)).order == 20160
    assert automorphism_group(grassmannian(5)).order == 120


def test_weave4_veblen_group_matches_brute_force():
    W = weave(4, veblen())
    assert len(brute_force_automorphisms(W)) == 96


def test_size_cap():
    with pytest.raises(MorphismError):
        automorphism_group(weave(5, pg(3)), max_points=50)


def test_enumerate_group():
    gens = [(1, 2, 0), (1, 0, 2)]
    assert len(enumerate_group(gens)) == 6
    with pytest.raises(MorphismError):
        enumerate_group([(1, 2, 3, 4, 5, 6, 7, 0), (1, 0, 2, 3, 4, 5, 6, 7)], cap=100)


def test_product_automorphism_and_composition():
    W = weave(4, veblen())
    V = veblen()
    auts = automorphism_group(V).elements()
    assert product_automorphism(W, identity(V), 0).map == tuple(range(W.v))
    for f in auts[:6]:
        F = product_automorphism(W, f, 1)
        assert is_automorphism(W, F.map)
        assert decompose_automorphism(W, F) == (f, 1)
    f, g = auts[3], auts[5]
    lhs = product_automorphism(W, f, 1).compose(product_automorphism(W, g, 2))
    assert lhs.map == product_automorphism(W, f.compose(g), 3).map
    with pytest.raises(MorphismError):
        product_automorphism(W, (1, 0, 2, 3, 4, 5), 0)


def test_all_automorphisms_of_weave4_veblen_decompose():
    W = weave(4, veblen())
    decs = set()
    for F in brute_force_automorphisms(W):
        d = decompose_automorphism(W, F)
        assert d is not NOT_PRODUCT
        assert permutes_line_fibres(W, F)
        decs.add((d[0].map, d[1]))
    assert len(decs) == 96


def test_m3_table_map():
    W = weave(3, veblen())
    F = m3_table_map(W)
    assert is_automorphism(W, F)
    assert induced_base_map(W, F).map == tuple(range(6))
    assert decompose_automorphism(W, F) is NOT_PRODUCT
    assert len(brute_force_automorphisms(W)) == automorphism_group(W).order == 432


def test_decompose_rejects_non_automorphism():
    W = weave(4, veblen())
    with pytest.raises(MorphismError):
        decompose_automorphism(W, tuple(reversed(range(W.v))))


def test_morphism_helpers():
    f = Morphism("automorphism", (1, 2, 0))
    assert f(0) == 1 and len(f) == 3
    assert f.compose(f.inverse()).map == (0, 1, 2)
    s = single_line()
    assert f.labelled(s, s) == {"a": "b", "b": "c", "c": "a"}
    assert not is_embedding(s, s, (0, 0, 1))
