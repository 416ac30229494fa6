"""NumPy fallback for the compiled placement-scoring kernel.

Vectorised over placements; the per-LGA accumulations stay sequential
(``np.cumsum`` and an explicit column loop) so results match the scalar
pipeline bit for bit. ``np.sum`` would use pairwise summation and would not.
"""

import numpy as np


def combo_gini(base_g, cand_g, combos, c, out):
    n = base_g.shape[0]
    if cand_g.shape[1] != n or out.shape[0] != combos.shape[0]:
        raise ValueError("shape mismatch")
    if combos.shape[0] == 0:
        return
    g = cand_g[combos].max(axis=1) if combos.shape[1] else np.zeros((combos.shape[0], n))
    t = c * np.maximum(base_g[None, :], g)
    t.sort(axis=1)
    cum = np.cumsum(t, axis=1)
    total = cum[:, -1:]
    with np.errstate(invalid="ignore", divide="ignore"):
        phi = cum / total
    area2 = np.zeros(t.shape[0])
    f_prev, phi_prev = 0.0, np.zeros(t.shape[0])
    for i in range(n):
        f = (i + 1) / n
        area2 = area2 + (f - f_prev) * (phi[:, i] + phi_prev)
        f_prev, phi_prev = f, phi[:, i]
    res = np.clip(1.0 - area2, 0.0, 1.0)
    res[total[:, 0] <= 0] = np.nan
    out[:] = res
