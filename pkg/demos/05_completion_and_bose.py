# Completing weave(3, AG(2,3)) to a Steiner triple system.
#
# Its noncollinearity classes are the fibres; adding them as lines gives a
# 27-point STS which coincides with the Bose construction over C3^2, and
# which is not AG(3,3).

from psts import bose, catalog, linear_completion, weave
from psts.core import is_linear_space, maximal_anticliques, triangles, subspace_closure
from psts.detect import is_pasch_free
from psts.morphisms import are_isomorphic, embedding

W = weave(3, catalog("ag(2)"))
print("maximal anti-cliques:", [[W.points[p] for p in c] for c in maximal_anticliques(W)][:3], "...")
K = linear_completion(W)
print("completion:", K.v, "points,", K.b, "lines, linear:", is_linear_space(K), " Pasch-free:", is_pasch_free(K).holds)
print("equals bose(2):", K == bose(2))
print("contains a miter:", embedding(catalog("miter"), K) is not None)

# %% triangle closures tell it apart from AG(3,3)
A = catalog("ag(3)")
sizes = lambda s: sorted({len(subspace_closure(s, t)) for t in triangles(s)})
print("closure sizes  completion:", sizes(K), "  AG(3,3):", sizes(A))
print("isomorphic:", are_isomorphic(K, A))
