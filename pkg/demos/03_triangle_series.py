# Inscribed triangles: take a triangle, replace it by the three third points
# of its sides, repeat.

from psts import catalog, poly_triangle, weave
from psts.core import derived_triangle, triangle_series, triangles
from psts.detect import classify_triangle

# %% in a weave, a level triangle over a base line walks around C_m and comes back
W = weave(5, catalog("single-line"))
s = triangle_series(W, (0, 5, 10))
for t in s.sets:
    print(sorted(W.points[p] for p in t))
print("reason:", s.reason, " period:", s.period, " threads permuted by", s.gamma)

# %% what every triangle of weave(4, veblen) turns into after one step
W = weave(4, catalog("veblen"))
tally = {}
for t in triangles(W):
    key = (classify_triangle(W, t), derived_triangle(W, t).kind)
    tally[key] = tally.get(key, 0) + 1
for (tag, kind), n in sorted(tally.items()):
    print(f"type {tag:3} -> {kind:10} x{n}")

# %% closing with a permutation: the threads come back shuffled
for g in ("id", "tau1", "sigma0"):
    P = poly_triangle(4, g)
    r = triangle_series(P, (0, 4, 8))
    print(f"poly(4,{g}): period {r.period}, gamma {r.gamma}")
