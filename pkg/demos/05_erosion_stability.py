"""Erosion distance: stability and the efficiency-versus-power dial.

The erosion distance between two rank tables is the least radius at
which each module's rank on every thickened interval is dominated by
the other's rank on the original.  A module and its diagonal shift by
delta are delta-interleaved by construction, so their erosion distance
never exceeds delta — the computable face of the stability theorem.
Restricting the collection to intervals with few extreme points trades
discriminating power for speed; the study table makes the trade visible.
"""

import numpy as np

from grinv import grid_poset
from grinv.erosion import (
    ThickeningFamily,
    erosion_distance,
    erosion_study,
    shift_module,
    study_table,
    union_bbox,
)
from grinv.sampling import random_interval_decomposable, random_module

rng = np.random.default_rng(23)
window = grid_poset(3, 3, (0, 0))
family = ThickeningFamily(2, 2)

print("stability under diagonal shifts:")
for delta in (0, 1, 2):
    module = random_module(rng, window)
    shifted = shift_module(module, delta)
    collection = family.members_within(union_bbox(module, shifted))
    d = erosion_distance(module, shifted, collection)
    print(f"  shift by {delta}: erosion distance = {d} (<= {delta})")
    assert d <= delta

print("\npseudometric sanity on a random triple:")
mods = [random_module(rng, window) for _ in range(3)]
collection = family.members_within(union_bbox(mods[0], mods[1]))
d01 = erosion_distance(mods[0], mods[1], collection)
d12 = erosion_distance(mods[1], mods[2], collection)
d02 = erosion_distance(mods[0], mods[2], collection)
print(f"  d01={d01} d12={d12} d02={d02}; triangle holds: {d02 <= d01 + d12}")

print("\nefficiency versus power (bigger budgets, bigger windows, more work):")


def builder(side):
    win = grid_poset(side, side, (0, 0))
    module, _ = random_interval_decomposable(rng, win, 3)
    return module, shift_module(module, 1)


rows = erosion_study(builder, sides=(3, 4, 5), budgets=((1, 1), (2, 1), (2, 2)))
print(study_table(rows))
