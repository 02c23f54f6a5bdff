# %% [markdown]
# # Latency trends
#
# Top-k cost should grow linearly in k; update cost only logarithmically
# in N. Absolute numbers depend on the machine. The same measurements are
# available as CSV via `utopk bench`.

# %%
from utopk.bench import bench

rows = bench("topk-vs-k", [20_000], seed=1, reps=30, warmup=5)
for r in rows:
    print(f"k={r['k']:>3}  mean {r['mean_ns'] / 1e3:8.1f} us")

# %%
rows = bench("ops-vs-n", [2_000, 16_000], seed=1, reps=300, warmup=20)
for r in rows:
    print(f"n={r['n']:>6} {r['op']:>6}  mean {r['mean_ns'] / 1e3:8.1f} us  p99 {r['p99_ns'] / 1e3:8.1f} us")
