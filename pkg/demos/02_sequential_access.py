"""Accessing 1..n in order from a left path.

Rotate-to-root pays quadratically while splay and Greedy stay linear.  The
wing potential explains the gap: it starts at n log n, ends at 0, and each
access can only release it slowly unless the algorithm creates many leaves.
"""

import math

from selfadjust.analysis import check_wing_telescoping
from selfadjust.harness import sequential_cost
from selfadjust.transformers import rotate_to_root, splay_global

for n in (256, 1024):
    print(f"n = {n}")
    for algo in ("rotate-to-root", "splay", "path-balance", "block3", "greedy"):
        c = sequential_cost(algo, n)
        print(f"  {algo:>15}: total {c:>8}  per access {c / n:8.2f}")

n = 512
for name, f in (("rotate-to-root", rotate_to_root), ("splay", splay_global)):
    slack, steps, _ = check_wing_telescoping(n, f)
    print(
        f"\n{name}: phi_0 = {steps[0].phi_before:.0f} (n log n = {n * math.log2(n):.0f}), "
        f"phi_n = {steps[-1].phi_after:.0f}, min telescoping slack = {slack:.2g}"
    )
