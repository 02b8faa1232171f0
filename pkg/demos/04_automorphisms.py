# Automorphisms of weaves: for m > 3 they are exactly base automorphism x shift.
# For m = 3 there are more.

from psts import automorphism_group, catalog, weave
from psts.morphisms import NOT_PRODUCT, decompose_automorphism
from psts.suite import m3_table_map

for name, m in (("veblen", 4), ("veblen", 5), ("pappus", 4), ("veblen", 3), ("single-line", 3)):
    M = catalog(name)
    W = weave(m, M)
    a, b = automorphism_group(M).order, automorphism_group(W).order
    print(f"{name:12} m={m}  |Aut M|={a:4}  |Aut W|={b:5}  m*|Aut M|={m * a:5}  {'=' if b == m * a else '>'}")

# %% one of the extra ones, written down by hand
W = weave(3, catalog("veblen"))
F = m3_table_map(W)
moved = {W.points[p]: W.points[q] for p, q in enumerate(F) if p != q}
print("F moves:", moved)
print("decomposes as f x shift?", decompose_automorphism(W, F) is not NOT_PRODUCT)
