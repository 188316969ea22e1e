"""Hot float kernels with a numba lane and a pure-numpy fallback lane.

The heavy inner loops of the package are (a) Gauss-Legendre panel
reductions inside the adaptive integrator, (b) piecewise Peano-kernel
evaluation on node arrays, and (c) the double kernel moment over purely
discrete windows.  Each kernel exists in two implementations:

* ``numpy`` -- vectorized numpy, always available;
* ``numba`` -- ``@njit``-compiled loops, used by default when numba
  imports cleanly.

Set the environment variable ``TSINEQ_NO_NUMBA=1`` before import to force
the numpy lane (useful for debugging and for the lane-comparison
benchmark in ``benchmarks/bench_accel.py``).  Exact-rational code paths
never route through this module; it only ever sees float64 arrays.
"""

import os

import numpy as np

_FORCE_NUMPY = os.environ.get("TSINEQ_NO_NUMBA", "").strip().lower() in (
    "1",
    "true",
    "yes",
)

try:
    if _FORCE_NUMPY:
        raise ImportError("numba disabled via TSINEQ_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# numpy lane
# ---------------------------------------------------------------------------

def _np_panel_reduce(vals, glw, half):
    """Per-panel Gauss-Legendre sums: out[p] = half[p] * sum_k glw[k] vals[p, k]."""
    return (vals @ glw) * half


def _np_piecewise_kernel(svals, wvals, t, c1, c2):
    """Peano kernel on an array: wvals - c1 where svals < t, else wvals - c2."""
    return np.where(svals < t, wvals - c1, wvals - c2)


def _np_double_moment_discrete(pts, mu, wvals, abs_ktx, c1, c2):
    """Double moment  sum_i mu_i |K(t_i, x)| * sum_j mu_j |K(s_j, t_i)|
    over a purely scattered window, via prefix sums (O(n) instead of O(n^2)).

    ``pts``/``wvals`` are the scattered points of [a, b) and the weight
    antiderivative there; ``abs_ktx`` holds |K(t_i, x)|.  K(s, t) uses the
    c1 branch for s < t and the c2 branch for s >= t.
    """
    g1 = mu * np.abs(wvals - c1)
    g2 = mu * np.abs(wvals - c2)
    # inner(t_i) = sum_{j < i} g1[j] + sum_{j >= i} g2[j]:  points are sorted
    # ascending, so s_j < t_i exactly when j < i.
    pre1 = np.concatenate(([0.0], np.cumsum(g1)[:-1]))
    suf2 = np.cumsum(g2[::-1])[::-1]
    inner = pre1 + suf2
    return float(np.sum(mu * abs_ktx * inner))


# ---------------------------------------------------------------------------
# numba lane
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _nb_panel_reduce(vals, glw, half):
        n_p, n_k = vals.shape
        out = np.empty(n_p)
        for p in range(n_p):
            s = 0.0
            for k in range(n_k):
                s += glw[k] * vals[p, k]
            out[p] = s * half[p]
        return out

    @njit(cache=True)
    def _nb_piecewise_kernel(svals, wvals, t, c1, c2):
        out = np.empty(svals.shape[0])
        for i in range(svals.shape[0]):
            if svals[i] < t:
                out[i] = wvals[i] - c1
            else:
                out[i] = wvals[i] - c2
        return out

    @njit(cache=True)
    def _nb_double_moment_discrete(pts, mu, wvals, abs_ktx, c1, c2):
        n = pts.shape[0]
        suf2 = 0.0
        for j in range(n):
            suf2 += mu[j] * abs(wvals[j] - c2)
        pre1 = 0.0
        total = 0.0
        for i in range(n):
            total += mu[i] * abs_ktx[i] * (pre1 + suf2)
            pre1 += mu[i] * abs(wvals[i] - c1)
            suf2 -= mu[i] * abs(wvals[i] - c2)
        return total


IMPLS = {
    "numpy": {
        "panel_reduce": _np_panel_reduce,
        "piecewise_kernel": _np_piecewise_kernel,
        "double_moment_discrete": _np_double_moment_discrete,
    }
}
if HAVE_NUMBA:
    IMPLS["numba"] = {
        "panel_reduce": _nb_panel_reduce,
        "piecewise_kernel": _nb_piecewise_kernel,
        "double_moment_discrete": _nb_double_moment_discrete,
    }

LANE = "numba" if HAVE_NUMBA else "numpy"

panel_reduce = IMPLS[LANE]["panel_reduce"]
piecewise_kernel = IMPLS[LANE]["piecewise_kernel"]
double_moment_discrete = IMPLS[LANE]["double_moment_discrete"]
