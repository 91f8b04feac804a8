"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

Set ``BOL_DISABLE_NUMBA=1`` to force the numpy path (useful for debugging
and for the benchmark in ``benchmarks/bench_kernels.py``).  The active
backend is reported in ``BACKEND``.
"""

import os

import numpy as np

_DISABLE = os.environ.get("BOL_DISABLE_NUMBA", "").strip() in {"1", "true", "yes"}

if not _DISABLE:
    try:
        import numba as _nb

        HAS_NUMBA = True
    except ImportError:  # pragma: no cover
        HAS_NUMBA = False
else:
    HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"


# -- discrete total variation -------------------------------------------------

def _tv_numpy(values, h):
    d = values.ndim
    total = 0.0
    for axis in range(d):
        padded = np.concatenate(
            [values, np.zeros_like(np.take(values, [0], axis=axis))], axis=axis
        )
        jumps = np.abs(np.diff(padded, axis=axis)).sum()
        # the jump into the box at index 0 (difference against the zero outside)
        jumps += np.abs(np.take(values, [0], axis=axis)).sum()
        total += jumps
    return total * h ** (d - 1)


if HAS_NUMBA:

    @_nb.njit(cache=True)
    def _tv1_nb(v):
        n = v.shape[0]
        acc = abs(v[0]) + abs(v[n - 1])
        for i in range(n - 1):
            acc += abs(v[i + 1] - v[i])
        return acc

    @_nb.njit(cache=True)
    def _tv2_nb(v, h):
        n0, n1 = v.shape
        acc = 0.0
        for i in range(n0):
            acc += abs(v[i, 0]) + abs(v[i, n1 - 1])
            for j in range(n1 - 1):
                acc += abs(v[i, j + 1] - v[i, j])
        for j in range(n1):
            acc += abs(v[0, j]) + abs(v[n0 - 1, j])
            for i in range(n0 - 1):
                acc += abs(v[i + 1, j] - v[i, j])
        return acc * h


def total_variation_sum(values, h):
    """Anisotropic discrete TV: per-axis absolute jumps times h^(d-1)."""
    if HAS_NUMBA:
        if values.ndim == 1:
            return _tv1_nb(np.ascontiguousarray(values))
        if values.ndim == 2:
            return _tv2_nb(np.ascontiguousarray(values), h)
    return _tv_numpy(values, h)


# -- L1 norms of lattice-shift differences ------------------------------------

def _shift_l1_numpy(values, shifts, h):
    d = values.ndim
    out = np.empty(len(shifts))
    for idx, k in enumerate(shifts):
        shape = tuple(n + abs(int(ki)) for n, ki in zip(values.shape, k))
        a = np.zeros(shape)
        b = np.zeros(shape)
        sl_a = tuple(
            slice(max(int(ki), 0), max(int(ki), 0) + n)
            for n, ki in zip(values.shape, k)
        )
        sl_b = tuple(
            slice(max(-int(ki), 0), max(-int(ki), 0) + n)
            for n, ki in zip(values.shape, k)
        )
        a[sl_a] = values
        b[sl_b] = values
        out[idx] = np.abs(b - a).sum()
    return out * h ** d


if HAS_NUMBA:

    @_nb.njit(cache=True, parallel=True)
    def _shift_l1_1d_nb(v, ks):
        n = v.shape[0]
        out = np.empty(ks.shape[0])
        for m in _nb.prange(ks.shape[0]):
            k = ks[m, 0]
            lo = min(0, -k)
            hi = max(n, n - k)
            acc = 0.0
            for i in range(lo, hi):
                a = v[i] if 0 <= i < n else 0.0
                j = i + k
                b = v[j] if 0 <= j < n else 0.0
                acc += abs(b - a)
            out[m] = acc
        return out

    @_nb.njit(cache=True, parallel=True)
    def _shift_l1_2d_nb(v, ks):
        n0, n1 = v.shape
        out = np.empty(ks.shape[0])
        for m in _nb.prange(ks.shape[0]):
            k0 = ks[m, 0]
            k1 = ks[m, 1]
            lo0 = min(0, -k0)
            hi0 = max(n0, n0 - k0)
            lo1 = min(0, -k1)
            hi1 = max(n1, n1 - k1)
            acc = 0.0
            for i in range(lo0, hi0):
                i2 = i + k0
                ok_i = 0 <= i < n0
                ok_i2 = 0 <= i2 < n0
                for j in range(lo1, hi1):
                    a = v[i, j] if ok_i and 0 <= j < n1 else 0.0
                    j2 = j + k1
                    b = v[i2, j2] if ok_i2 and 0 <= j2 < n1 else 0.0
                    acc += abs(b - a)
            out[m] = acc
        return out


def shift_l1_batch(values, shifts, h):
    """L1 norm of f(.+k*h)-f for each integer lattice vector in ``shifts``."""
    shifts = np.asarray(shifts, dtype=np.int64).reshape(len(shifts), -1)
    if HAS_NUMBA and values.ndim in (1, 2):
        v = np.ascontiguousarray(values, dtype=np.float64)
        if values.ndim == 1:
            return _shift_l1_1d_nb(v, shifts) * h
        return _shift_l1_2d_nb(v, shifts) * h ** 2
    return _shift_l1_numpy(values, shifts, h)


# -- Monte Carlo volume of a symmetric difference of two balls -----------------

def _mc_symdiff_numpy(dim, radius, center_dist, n_samples, seed):
    rng = np.random.default_rng(seed)
    lo = np.full(dim, -radius)
    hi = np.full(dim, radius)
    hi[0] += center_dist
    box = float(np.prod(hi - lo))
    hits = 0
    left = n_samples
    r2 = radius * radius
    while left > 0:
        m = min(left, 2_000_000)
        pts = rng.uniform(lo, hi, size=(m, dim))
        d0 = np.einsum("ij,ij->i", pts, pts)
        pts[:, 0] -= center_dist
        d1 = np.einsum("ij,ij->i", pts, pts)
        hits += int(np.count_nonzero((d0 <= r2) ^ (d1 <= r2)))
        left -= m
    p = hits / n_samples
    vol = box * p
    stderr = box * np.sqrt(max(p * (1.0 - p), 0.0) / n_samples)
    return vol, stderr


def mc_symdiff_volume(dim, radius, center_dist, n_samples, seed):
    """Volume of (B0 u B1) \\ (B0 n B1) for balls of equal radius.

    Centers sit at 0 and (center_dist, 0, ..., 0).  Returns (estimate,
    standard error).  Sampling is chunked and deterministic for a fixed
    seed; both backends share the numpy generator so results match.
    """
    return _mc_symdiff_numpy(dim, radius, center_dist, n_samples, seed)
