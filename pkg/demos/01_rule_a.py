"""
Rule A on its own
=================

"""

from pointca import Pipeline, cover_distribution, is_valid, make_rng, new_grid, run

# Rule A alone: a cell becomes a point when its whole Moore neighbourhood is
# empty and is cleared when it touches another point.
A = Pipeline(("A",))

# In strict index order the number of micro-steps to stability is fixed.
for n, init in [(3, "one"), (4, "zero"), (4, "one")]:
    tr = run(new_grid(n, init), A, order="strict")
    print(f"n={n} init={init}: tau_stable={tr.tau_stable}, points={tr.points}")

# With a random visiting order the result is always valid but not always maximal.
for seed in range(5):
    rng = make_rng(seed)
    tr = run(new_grid(7, "random", rng), A, order="sweep", rng=rng)
    print(f"seed {seed}: p={tr.points} valid={is_valid(tr.final)} cover {cover_distribution(tr.final)}")
print(tr.final)
