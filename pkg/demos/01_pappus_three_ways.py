# Four recipes, one 9_3 configuration.
#
# Weaving a single line with C3, convolving it with C3, closing three
# inscribed triangles, and deleting a parallel class from AG(2,3) all give
# the same thing. Run: python3 demos/01_pappus_three_ways.py

from psts import are_isomorphic, catalog, convolve, poly_triangle, weave
from psts.core import params
from psts.groups import AbelianGroup

line = catalog("single-line")

# %%
candidates = {
    "weave(3, line)": weave(3, line),
    "convolve(line, C3, 0)": convolve(line, AbelianGroup.cyclic(3), 0),
    "poly(3, id)": poly_triangle(3, "id"),
    "slit(2)": catalog("slit(2)"),
}
for name, s in candidates.items():
    p = params(s)
    print(f"{name:24} v={p.v} b={p.b} r={p.r}")

# %%
ref = catalog("pappus")
for name, s in candidates.items():
    print(name, "~ pappus:", are_isomorphic(s, ref))

# %% the other two 9_3's come from closing the triangles with a twist
for g in ("tau1", "sigma0"):
    print(f"poly(3,{g}) ~ pappus:", are_isomorphic(poly_triangle(3, g), ref))
