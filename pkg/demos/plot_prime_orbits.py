"""
Prime periodic orbits of the step graph
=======================================

Periodic orbits are coded by binary Lyndon words: symbol ``1`` is a round
trip on the free bond, ``2`` a round trip on the loaded bond.  Their number
grows like ``2**q / q``, so long orbits are handled through classes that only
remember symbol counts and block counts.
"""

from qgraph import build_step_graph, necklace_count, orbit_classes, orbit_stats
from qgraph.orbits import lyndon_codes, code_to_word

graph = build_step_graph(0.3, 0.5)

# %%
# All prime orbits up to length 4 with their amplitudes.
print(f"{'word':>6} {'sigma':>5} {'tau':>3} {'chi':>3} {'S_p':>9} {'A_p':>10}")
for q in range(1, 5):
    for code in lyndon_codes(q):
        o = orbit_stats(code_to_word(code, q), graph)
        print(f"{o.word:>6} {o.sigma:5d} {o.tau:3d} {o.chi:3d} {o.action:9.5f} {o.amplitude:10.6f}")

# %%
# Orbit counts grow exponentially.
for q in (10, 20, 28, 60, 150):
    print(f"q = {q:3d}: {necklace_count(q)} prime orbits")

# %%
# Classes collapse those counts to a few thousand rows even at q = 150.
classes = orbit_classes(150)
print(f"q = 150: {len(classes)} classes, largest multiplicity {max(c.multiplicity for c in classes):.3e}")
