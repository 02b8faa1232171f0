# Weaving does not create Pasch configurations.
#
# Start from two Pasch-free bases, AG(2,3) and the 27-point bose(2), and
# from PG(3,2), which is full of Pasch configurations; count them before
# and after weaving.

import time

from psts import bose, catalog, weave
from psts.detect import veblen_census, veblen_occurrences

for base in (catalog("ag(2)"), bose(2), catalog("pg(3)")):
    n0 = len(veblen_occurrences(base))
    for m in (3, 4):
        t = time.perf_counter()
        W = weave(m, base)
        n = len(veblen_occurrences(W))
        print(f"{base.name:8} pasch={n0:4}   weave({m}) v={W.v:3} pasch={n:5}   ({time.perf_counter() - t:.2f}s)")

# %% every Pasch in a weave lies over a Pasch of the base, in one fixed shape
W = weave(4, catalog("pg(3)"))
c = veblen_census(W)
print("pg(3) weave(4):", c["hits"], "hits,", c["conforming"], "on template,", len(c["nonconforming"]), "off")
print("ratio to base Pasch count:", c["hits"] / len(veblen_occurrences(catalog("pg(3)"))), "= 3m")
