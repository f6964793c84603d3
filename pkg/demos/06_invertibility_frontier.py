"""When does a rank table admit a finite signed-diagram encoding?

On a finite window every table inverts, but the *support* needed can
grow without bound as the window does.  The serrated-cap module is the
canonical witness: each admissible shift of the serrated interval has
rank exactly 1 and every honest strict superset has rank 0, so each
serrated interval insists on carrying +1 in any inversion — and a fixed
single point must then absorb one unit minus one per shift.  As the
window grows, the deficit at that point diverges, so no window-stable
finite support exists.
"""

import numpy as np

from grinv import generalized_rank, gri, gpd
from grinv.fixtures import build_fixture, claim2_supersets
from grinv.invariants import verify_invertibility
from grinv.posets import GridInterval

rng = np.random.default_rng(5)
point = GridInterval.from_points([(-1, -1)])

for window in (4, 6, 8):
    fx = build_fixture("thm-tame-counterexample", window=window)
    module = fx.modules["m"]
    serrated = sorted(fx.intervals.values(), key=lambda gi: gi.sort_key)
    print(f"window {window}x{window}: {len(serrated)} admissible shifts")
    for label, gi in sorted(fx.intervals.items()):
        print(f"  rank {label} = {generalized_rank(module, gi)}")
    supersets = claim2_supersets(fx, rng, count=5)
    ranks = sorted({generalized_rank(module, s) for s in supersets})
    print(f"  5 sampled strict connected supersets all have rank {ranks}")

    table = gri(module, serrated + [point])
    diagram = gpd(table)
    print(f"  diagram value at the fixed point: {diagram.value_of(point):+d}")
    report = verify_invertibility(table, serrated)
    verdict = "closes" if report.ok else f"fails at the fixed point"
    print(f"  inversion over the serrated intervals alone {verdict}\n")

print("the deficit at the fixed point is 1 - #shifts: it diverges with the window,")
print("so the serrated demands can never be balanced by finitely many intervals")
