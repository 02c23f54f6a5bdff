# %% [markdown]
# # Maintaining top-k under updates
#
# Build the tree index over a synthetic relation, then insert, delete and
# update tuples while checking answers against a rebuild from scratch.

# %%
import numpy as np

from utopk import TopKIndex, UncertainTuple
from utopk.data import generate, illustrative_config

rel = generate(illustrative_config(5_000, seed=42))
index = TopKIndex.build(rel, alpha=0.95)
print(f"{len(index)} tuples, tree height {index.height}")
for rank, (tid, u) in enumerate(index.top_k(5), start=1):
    t = index.leaf(tid).tuple
    print(f"  #{rank}: id {tid:>5} score {t.score:9.1f} prob {t.prob:.3f} upsilon {u:.4f}")

# %% [markdown]
# Each update touches O(log N) nodes; the `merges` counter tracks node
# recomputations.

# %%
rng = np.random.default_rng(0)
before = index.merges
for j in range(1_000):
    ids = list(index._leaves)
    index.delete_tuple(ids[int(rng.integers(len(ids)))])
    index.insert_tuple(UncertainTuple(100_000 + j, float(rng.uniform(0, 1e5)), float(rng.uniform(0.05, 0.3)), f"new{j}"))
print(f"node recomputations per op: {(index.merges - before) / 2_000:.1f}")

# %%
index.audit()
fresh = TopKIndex.build(index.relation, alpha=0.95)
assert index.top_k(20).ids == fresh.top_k(20).ids
print("top-20 after 2000 updates matches a fresh build:", index.top_k(20).ids[:5], "...")
