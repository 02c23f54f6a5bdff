# %% [markdown]
# # Rank-scores on a small radar relation
#
# Six speed readings; readings 2/4 and 3/6 come from the same car seen by
# two radars, so at most one of each pair can be true. We compute every
# tuple's rank-score two ways: from the per-tuple coefficients, and by
# brute force over all possible worlds.

# %%
from utopk import leaf_coefficients, rank_scores
from utopk.data import traffic_relation
from utopk.oracle import enumerate_worlds, exponential_weight, prf

rel = traffic_relation()
alpha = 0.9

# %%
coef = leaf_coefficients(rel, alpha)
ups = rank_scores(rel, alpha)
print("id  score  prob   hat_p     m       c     upsilon   brute-force")
for t in rel.ordered():
    lc = coef[t.id]
    brute = prf(rel, exponential_weight(alpha), t.id)
    print(f"{t.id:>2} {t.score:6.0f} {t.prob:5.2f} {lc.hat_p:7.3f} {lc.m:7.3f} {lc.c:7.3f} {ups[t.id]:9.4f} {brute:11.4f}")

# %% [markdown]
# The world where readings 1, 2 and 3 are present (and 4, 5, 6 absent):

# %%
worlds = enumerate_worlds(rel)
w = next(w for w in worlds if w.tuples == {1, 2, 3})
print(f"{len(worlds)} worlds, Pr({{1,2,3}}) = {w.prob:.4f}, total mass = {sum(x.prob for x in worlds):.12f}")
