"""Backend selection for the placement-scoring kernel.

The compiled extension is used when it imports; otherwise the NumPy fallback.
Set ``CACCESS_PURE_PYTHON=1`` to force the fallback.

Both backends produce bit-identical scores. With no explicit backend, regions
larger than :data:`COMPILED_MAX_LGAS` go to the NumPy path, whose vectorised
row sort overtakes the compiled per-row sort at that size (see
``benchmarks/bench_planner.py``).
"""

import os

import numpy as np

from . import _kernels_py

try:
    if os.environ.get("CACCESS_PURE_PYTHON"):
        raise ImportError("compiled backend disabled by CACCESS_PURE_PYTHON")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
AVAILABLE = ("cython", "python") if _compiled is not None else ("python",)
COMPILED_MAX_LGAS = 40


def combo_gini(base_g, cand_g, combos, c, backend=None):
    """Gini coefficient for every placement.

    Parameters
    ----------
    base_g : ndarray, shape (N,)
        Distance factor of each LGA under the existing facilities.
    cand_g : ndarray, shape (M, N)
        Distance factor each candidate site alone would give each LGA.
    combos : ndarray of intp, shape (R, k)
        Candidate rows making up each placement.
    c : float
        Separations-per-incidence multiplier.
    backend : {"cython", "python"}, optional
        Defaults to :data:`BACKEND`, or ``"python"`` above
        :data:`COMPILED_MAX_LGAS` LGAs.

    Returns
    -------
    ndarray, shape (R,)
        NaN where every ratio of the placement is zero.
    """
    if backend is None:
        backend = BACKEND if len(base_g) <= COMPILED_MAX_LGAS else "python"
    if backend not in AVAILABLE:
        raise ValueError(f"backend {backend!r} not available (have {AVAILABLE})")
    impl = _compiled if backend == "cython" else _kernels_py
    base_g = np.ascontiguousarray(base_g, dtype=np.float64)
    cand_g = np.ascontiguousarray(cand_g, dtype=np.float64)
    combos = np.ascontiguousarray(combos, dtype=np.intp)
    if cand_g.ndim != 2 or combos.ndim != 2:
        raise ValueError("cand_g and combos must be 2-D")
    if combos.size and (combos.min() < 0 or combos.max() >= cand_g.shape[0]):
        raise IndexError("candidate index out of range")
    out = np.empty(combos.shape[0], dtype=np.float64)
    impl.combo_gini(base_g, cand_g, combos, float(c), out)
    return out
