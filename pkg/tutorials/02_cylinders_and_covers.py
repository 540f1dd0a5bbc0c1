# coding: utf-8
"""
Cylinders and covers of S(-P,u)
===============================

The set keeps the numbers whose nega-P digits are made of u-runs: block c
stands for c-1 copies of u followed by c.  Rank-n cylinders are closed
intervals; we list them and watch their total length shrink.
"""

from fractions import Fraction

import numpy as np

from negamoran import ProbVector, SystemParams, build_cover, expand_blocks, measure_sequence
from negamoran.cylinders import cyl_interval_S, separation_check

params = SystemParams(5, 2)
P = ProbVector.uniform(5)

print("blocks 1,3,4 ->", expand_blocks(params, [1, 3, 4]))

# %%
# One cylinder, exact endpoints

iv = cyl_interval_S(params, P, (1, 3))
print(iv.lo, iv.hi, float(iv.diameter))

# %%
# Rank-2 cover: 9 disjoint intervals, sorted

cover = build_cover(params, P, 2)
for base, iv in cover.intervals:
    print(base, float(iv.lo), float(iv.hi))
print("gaps all positive:", cover.is_disjoint())

# %%
# Neighbouring siblings never touch

rep = separation_check(params, P, (1,), 3)
print("left sibling:", rep.actual_left, "gap:", rep.gap)

# %%
# Lebesgue measure of the covers decays geometrically

rows = measure_sequence(params, P, 6)
lam = np.array([float(r.measure) for r in rows])
print(lam)
print("ratios", lam[1:] / lam[:-1])
print("expected", float(sum(Fraction(1, 5**c) for c in params.Abar)))
