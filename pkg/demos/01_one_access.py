"""One access, four restructurings.

A zig-zag search path is handed to each transformer.  For every after-tree we
print its shape, the potential drop under random weights and the slack of
the decomposition bound (a non-negative slack means the access is paid for).
"""

import numpy as np

from selfadjust.analysis import (
    WeightMap,
    canonical_decomposition,
    check_theorem_bound,
    depth_class_decomposition,
    monotone_partition,
    potential_drop,
    side_alternations,
)
from selfadjust.bst import BeforePath
from selfadjust.transformers import TRANSFORMERS

path = BeforePath.from_directions("LLRLRRLLL")
print("before-path:", path.keys, " accessed key s =", path.s)
print("side alternations z =", side_alternations(path))

w = WeightMap.random(sorted(path.keys), np.random.default_rng(0))
for name, transform in TRANSFORMERS.items():
    after = transform(path)
    mp = monotone_partition(after)
    dec = (depth_class_decomposition if name == "path-balance" else canonical_decomposition)(path, after)
    slack = check_theorem_bound(path, path, after, w, dec)
    print(f"\n{name:>15}: {after.sketch()}")
    print(f"{'':>15}  leaves={len(after.leaves())}  l_left={mp.l_left}  l_right={mp.l_right}")
    print(f"{'':>15}  potential drop={potential_drop(path, after, w, path.keys):+.3f}  bound slack={slack:.3f}")
