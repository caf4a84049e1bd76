"""Collision profile of a message set and low-dimensional subset extraction."""

import numpy as np

from listrec.galois import field
from listrec.sigma import extract_low_dim_subset, is_good_average, sigma_profile

F = field(7)
# six points on a line through the origin plus six spread-out vectors
line = [[(c * x) % 7 for x in (1, 2, 3, 4)] for c in range(1, 7)]
spread = [[5, 4, 3, 1], [2, 0, 0, 0], [1, 5, 4, 6], [3, 4, 6, 5], [4, 3, 3, 6], [1, 5, 4, 0]]
Lam = np.array(line + spread)

prof = sigma_profile(F, Lam, p_max=3)
for e in prof.values:
    print(f"sigma_{e.p} = {e.value} ({float(e.value):.5f}, {e.mode})")

g = is_good_average(F, Lam, d=4, zeta="1/5", ell=1)
print("good:", g.good, "first violation at p =", g.first_violation)
ex = extract_low_dim_subset(F, Lam, d=4, zeta="1/5", ell=1)
if ex is not None:
    print("extracted", sorted(ex.subset.indices.tolist()), "dim", ex.subset.dim,
          "size bound", round(ex.size_bound, 3), "meets contract", ex.meets_contract)
