"""
Convergence of the explicit eigenvalue expansion
================================================

Each root of a regular step graph can be written as the mean-level value
``pi n / S0`` minus a sum over periodic orbits.  Truncating that sum at orbit
length ``q`` and comparing with bisection shows how the error shrinks.
"""

from qgraph import ExpansionConfig, build_step_graph, convergence_scan, power_law_fit
from qgraph.explicit import window_median

graph = build_step_graph(0.3, 0.5)

# %%
# Long orbits through the grouped path, for three roots.
records = convergence_scan(graph, [1, 10, 100], range(0, 151), ExpansionConfig(150, use_grouped=True))

# %%
# A few rows of the error table.
for r in records:
    if r.q in (0, 1, 5, 25, 150):
        print(f"n = {r.n:3d}  q = {r.q:3d}  k = {r.k_explicit:.12f}  eps = {r.eps:.3e}")

# %%
# Windowed medians smooth out the quasi-periodic wiggle of the error.
for n in (1, 10, 100):
    rs = [r for r in records if r.n == n]
    medians = [window_median(rs, a, b) for a, b in ((5, 10), (20, 25), (51, 100), (101, 150))]
    slope = power_law_fit(rs, 5, 150)
    print(f"n = {n:3d}: medians " + " ".join(f"{m:.2e}" for m in medians) + f"  slope {slope:.2f}")

# %%
# The other ordering keeps every repetition of each prime orbit up to the
# prime length cutoff.  It converges as well, but more slowly.
prime = convergence_scan(graph, [1], range(1, 151), ExpansionConfig(150, use_grouped=True, order="prime"))
print(f"prime ordering, n = 1: slope {power_law_fit(prime, 5, 150):.2f}")
