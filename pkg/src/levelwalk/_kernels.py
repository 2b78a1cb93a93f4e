"""Optional numba kernel for the lockstep walker engine.

Produces bit-identical results to the numpy twin in `engine`: same splitmix64
draws, same 53-bit threshold compares. Import failure (no numba) is fine; the
engine falls back to numpy.
"""

import numpy as np

try:
    import numba as nb

    AVAILABLE = True
except ImportError:  # pragma: no cover
    nb = None
    AVAILABLE = False

if AVAILABLE:
    _U = np.uint64
    _GOLDEN = _U(0x9E3779B97F4A7C15)
    _M1 = _U(0xBF58476D1CE4E5B9)
    _M2 = _U(0x94D049BB133111EB)

    @nb.njit(nb.uint64(nb.uint64), inline="always", cache=True)
    def _mix64(z):
        z = (z ^ (z >> _U(30))) * _M1
        z = (z ^ (z >> _U(27))) * _M2
        return z ^ (z >> _U(31))

    @nb.njit(cache=True, parallel=True)
    def steps_kernel(keys, base, n_moves, parent, child0, child1, thp, th0, th1, out):
        W = keys.shape[0]
        for w in nb.prange(W):
            k = keys[w]
            ctr = base[w]
            s = np.int64(0)
            for t in range(n_moves[w]):
                y = _mix64(k + _GOLDEN * (ctr + _U(t + 1))) >> _U(11)
                i1 = np.int64(y < thp[s])
                i2 = np.int64(y < th0[s])
                i3 = np.int64(y < th1[s])
                s = (
                    i1 * parent[s]
                    + (i2 - i1) * child0[s]
                    + (i3 - i2) * child1[s]
                    + (np.int64(1) - i3) * s
                )
            out[w] = s
else:  # pragma: no cover
    def steps_kernel(*args):
        raise RuntimeError("numba is not available")
