"""Walk through Reidemeister moves and watch the matrix ranks follow n + d - l.

Run: python3 demos/move_walk.py [seed]
"""

import random
import sys

from regionchoice import corpus
from regionchoice.moves import random_walk, rank_delta_check

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
dg = corpus.builtin("kink_plus_loops(2)").diagram
print(f"start: n={dg.n} d={dg.d} l={dg.l}")
for step, (after, spec) in enumerate(random_walk(dg, random.Random(seed), 20, max_crossings=10), 1):
    report = rank_delta_check(dg, after, spec)
    flag = "ok" if report.ok else "MISMATCH " + "; ".join(report.problems)
    print(f"{step:2d} {spec.kind:15s} n={after.n:2d} d={after.d} rank={report.ranks_after['a2']:2d} "
          f"kernel={report.kernel_after['a2']}  {flag}")
    dg = after
