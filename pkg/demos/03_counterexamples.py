"""Restructurings that look good locally but defeat the sum-of-logs argument.

fig2-left halves every depth yet leaves few leaves and alternations, so the
depth-halving conditions fail for every positive epsilon.  fig3 halves depths
while building a long one-sided turn sequence; weighting that sequence
heavily makes the potential rise far beyond what an access lemma allows.
"""

from selfadjust.analysis import adversarial_weights
from selfadjust.harness import gen_counterexample

for family in ("fig2-left", "fig2-right", "fig3"):
    _, _, rep = gen_counterexample(family, 1024)
    print(f"{family}: ok={rep.ok}  checks={rep.checks}")
    print(f"  stats={ {k: round(v, 3) for k, v in rep.stats.items()} }")

_, _, rep = gen_counterexample("fig2-left", 4096)
for eps, w in rep.witness["halving_failures"].items():
    print(f"  fig2-left, eps={eps}: key {w['key']} fails ({w['detail']})")

path, after, _ = gen_counterexample("fig3", 1024)
r = adversarial_weights(path, after, len(path) ** 4)
print(f"\nfig3 with K = |P|^4: k={r.k} turns, potential rises by {r.gap:.0f}")
print(f"  lower bound {r.bound:.0f}, access-lemma budget {r.budget:.0f}, exceeded: {r.exceeds_budget}")
