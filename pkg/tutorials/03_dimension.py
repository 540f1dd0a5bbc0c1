# coding: utf-8
"""
Hausdorff dimension
===================

Three routes to the same number for the uniform case, and the
pre-dimension trace for a skewed probability vector.
"""

from fractions import Fraction

import numpy as np

from negamoran import (ProbVector, SystemParams, boxcount_estimate, dim_theorem5, dim_theorem7,
                       dimension_trace)

params = SystemParams(4, 0)
U = ProbVector.uniform(4)

# %%
# Root of 4^-a + 16^-a + 64^-a = 1

print("formula   ", dim_theorem5(params))
print("self-sim. ", dim_theorem7(params, U))
print("trace     ", dimension_trace(params, U, k_max=10).liminf_est)

# %%
# Box counting on the rank-8 cover (6561 intervals)

bc = boxcount_estimate(params, U, 8)
print(f"box slope  {bc.slope:.4f} +- {bc.stderr:.4f} over {bc.decades:.1f} decades")

# %%
# A skewed P breaks self-similarity: ratios depend on digit-sum parity

P = ProbVector((Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8)))
tr = dimension_trace(params, P, k_max=40)
alphas = np.array(tr.alphas)
print(alphas[[0, 4, 9, 19, 39]])
print("liminf estimate", tr.liminf_est, "limit", tr.limit)
print("positive set   ", dim_theorem7(params, P))
print(tr.hypothesis_flags)
