"""The geometric view and local decompositions.

A BST becomes a height diagram; the stair of a key is its search path and a
neighborhood is its subtree.  Greedy raises the whole stair at each access.
Separately, a splay after-tree is rebuilt from the before-path by a sequence
of small windows, checked by the locality verifier.
"""

from selfadjust.bst import BeforePath, TreeArena
from selfadjust.geometry import neighborhood, stair, tree_to_height_diagram
from selfadjust.harness import Workload, run_greedy
from selfadjust.locality import synthesize_local, verify_local
from selfadjust.transformers import splay_global

t = TreeArena.balanced(range(1, 8))
h = tree_to_height_diagram(t)
print("tree", t.sketch(), "-> heights", h.tolist())
print("stair(5) =", stair(h, 5), " search path =", list(t.search_path(5).keys))
print("neighborhood(6) =", list(neighborhood(h, 6).keys()))

g = run_greedy(Workload("zipf", 256, 2000, alpha=1.1, seed=1), "random")
print(f"\nGreedy on zipf: total cost {g.total_cost}, audit slack {g.min_slack:.3f}, disjoint={g.all_disjoint}")

path = BeforePath.from_directions("LLRLRRLRLLRR")
after = splay_global(path)
dec = synthesize_local(path, after)
print(f"\nsplay after-tree {after.sketch()}")
for keys, piece in dec.steps:
    print(f"  rewrite {keys} -> {piece.sketch()}")
print("window", dec.window, "verified:", bool(verify_local(path, after, dec, dec.window)))
