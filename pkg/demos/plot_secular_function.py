"""
Secular function and root zones of a step graph
================================================

A unit well with a potential step at ``b`` has a secular function made of a
leading sine and a single secondary term.  When the secondary amplitudes sum
to less than one, every root sits alone in its own allowed zone.
"""

import numpy as np

from qgraph import (
    build_step_graph,
    chain_to_trig_polynomial,
    evaluate,
    find_root_in_zone,
    regularity,
    root_zone,
)

# %%
# Build the step graph and its trigonometric polynomial.
graph = build_step_graph(0.3, 0.5)
trig = chain_to_trig_polynomial(graph.chain())
print(f"S0 = {trig.S0:.6f}, r = {graph.r:.6f}")
for term in trig.terms:
    print(f"secondary term: a = {term.a:.6f}, S = {term.S:.6f}, gamma = {term.gamma}")

# %%
# Regularity: alpha < 1 gives a forbidden half-width ``u`` around each separator.
rep = regularity(trig)
print(f"alpha = {rep.alpha:.6f}, regular = {rep.regular}, u = {rep.u:.6f}, mu = {rep.mu}")

# %%
# Bisection inside each allowed zone gives the roots.
print(f"{'n':>4} {'zone lo':>10} {'k_n':>14} {'zone hi':>10}")
for n in (1, 2, 3, 10, 100):
    zone = root_zone(rep, n)
    k = find_root_in_zone(trig, rep, n)
    print(f"{n:4d} {zone.lo:10.4f} {k:14.10f} {zone.hi:10.4f}")

# %%
# The function never vanishes inside the forbidden zones.
k = np.linspace(0.01, 40, 4001)
values = evaluate(trig, k)
print("sign changes below k = 40:", int(np.count_nonzero(np.diff(np.sign(values)))))
