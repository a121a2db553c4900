"""Integer-lattice hot loops.

States are rows of int64 numerators over one common denominator ``D``; a row
holds ``nb`` blocks of ``m`` slots (metric codes 0/1) or ``(anchor, length)``
for arcs (code 2, ``length == D`` is the full circle). All distances are
returned doubled so the arc metric, whose extreme values sit at half a gap,
stays integral.

Kernels are compiled with numba unless ``NDSTK_NUMBA=0``; the point-metric
distance matrices then switch to a broadcast numpy path and the sequential
scans run as ordinary Python.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

INTERVAL_CODE = 0
CIRCLE_CODE = 1
ARC_CODE = 2

# bucket index arithmetic runs mod 2^31 so products stay inside int64
_KEY_MASK = np.int64(0x7FFFFFFF)


@njit(inline="always")
def _pdist(x, y, code, D):
    d = np.int64(x) - np.int64(y)
    if d < 0:
        d = -d
    if code == 1:
        d = d % D
        if D - d < d:
            d = D - d
    return d


@njit(inline="always")
def _gap_sup2(p, q, g):
    # doubled sup of min(t, g - t) (zero beyond g) over t in [p, q]
    if 2 * p <= g and g <= 2 * q:
        return g
    best = 0
    for t in (p, q):
        if t <= g:
            v = t if t < g - t else g - t
            if 2 * v > best:
                best = 2 * v
    return best


@njit(inline="always")
def _arc_directed2(a0, l0, a1, l1, D):
    if l1 >= D:
        return 0
    g = D - l1
    b1 = (a1 + l1) % D
    s = (a0 - b1) % D
    L = D if l0 >= D else l0
    if s + L <= D:
        return _gap_sup2(s, s + L, g)
    u = _gap_sup2(s, D, g)
    v = _gap_sup2(0, s + L - D, g)
    return u if u > v else v


@njit
def state_dist2(a, b, code, nb, m, D):
    """Doubled distance between two encoded states (1-D rows)."""
    if code == 2:
        u = _arc_directed2(a[0], a[1], b[0], b[1], D)
        v = _arc_directed2(b[0], b[1], a[0], a[1], D)
        return u if u > v else v
    best = 0
    for blk in range(nb):
        base = blk * m
        for i in range(m):
            lo = -1
            for j in range(m):
                d = _pdist(a[base + i], b[base + j], code, D)
                if lo < 0 or d < lo:
                    lo = d
            if lo > best:
                best = lo
        for i in range(m):
            lo = -1
            for j in range(m):
                d = _pdist(b[base + i], a[base + j], code, D)
                if lo < 0 or d < lo:
                    lo = d
            if lo > best:
                best = lo
    return 2 * best


@njit(inline="always")
def traj_dist2(A, i, B, j, t, code, nb, m, D):
    """Doubled distance between ``A[i, t]`` and ``B[j, t]`` without slicing rows."""
    if code == 2:
        u = _arc_directed2(A[i, t, 0], A[i, t, 1], B[j, t, 0], B[j, t, 1], D)
        v = _arc_directed2(B[j, t, 0], B[j, t, 1], A[i, t, 0], A[i, t, 1], D)
        return u if u > v else v
    best = 0
    if m == 1:
        for blk in range(nb):
            d = _pdist(A[i, t, blk], B[j, t, blk], code, D)
            if d > best:
                best = d
        return 2 * best
    for blk in range(nb):
        base = blk * m
        for p in range(m):
            lo = -1
            for q in range(m):
                d = _pdist(A[i, t, base + p], B[j, t, base + q], code, D)
                if lo < 0 or d < lo:
                    lo = d
            if lo > best:
                best = lo
        for p in range(m):
            lo = -1
            for q in range(m):
                d = _pdist(B[j, t, base + p], A[i, t, base + q], code, D)
                if lo < 0 or d < lo:
                    lo = d
            if lo > best:
                best = lo
    return 2 * best


@njit(inline="always")
def _bowen_close(A, i, B, j, E2, code, nb, m, D):
    # True when trajectories A[i] and B[j] never separate by more than eps
    n = A.shape[1]
    if code == 0 and m == 1:
        for s in range(n):
            t = n - 1 - s
            for blk in range(nb):
                d = np.int64(A[i, t, blk]) - np.int64(B[j, t, blk])
                if 2 * d > E2 or -2 * d > E2:
                    return False
        return True
    if code == 2:
        for s in range(n):
            if traj_dist2(A, i, B, j, n - 1 - s, code, nb, m, D) > E2:
                return False
        return True
    for s in range(n):
        if not _sets_close(A, i, B, j, n - 1 - s, E2, code, nb, m, D):
            return False
    return True


@njit(inline="always")
def _covered(A, i, B, j, t, base, p, E2, code, m, D):
    # some point of B[j, t] block lies within eps of point p of A[i, t]
    for q in range(m):
        if 2 * _pdist(A[i, t, base + p], B[j, t, base + q], code, D) <= E2:
            return True
    return False


@njit(inline="always")
def _sets_close(A, i, B, j, t, E2, code, nb, m, D):
    # traj_dist2(...) <= E2, stopping at the first uncovered point
    for blk in range(nb):
        base = blk * m
        for p in range(m):
            if not _covered(A, i, B, j, t, base, p, E2, code, m, D):
                return False
            if not _covered(B, j, A, i, t, base, p, E2, code, m, D):
                return False
    return True


@njit(inline="always")
def _bucket(keys, i, ncells, mask):
    # mixed-radix cell index: cells adjacent along the scan share cache lines
    h = np.int64(0)
    for k in range(keys.shape[1]):
        h = (h * (ncells[k] & _KEY_MASK) + (keys[i, k] & _KEY_MASK)) & _KEY_MASK
    return h & mask


@njit
def _offset_table(ncells, wrap):
    """Neighbour offsets in {-1, 0, 1}^K, minus those that would revisit a
    cell on a wrapped axis with at most two cells."""
    K = ncells.shape[0]
    total = 1
    for _ in range(K):
        total *= 3
    out = np.empty((total, K), np.int64)
    rows = 0
    for combo in range(total):
        c = combo
        ok = True
        for k in range(K):
            r = c % 3
            c //= 3
            off = 0 if r == 0 else (-1 if r == 1 else 1)
            if off != 0 and ncells[k] <= 2 and wrap[k] and (ncells[k] == 1 or off == 1):
                ok = False
                break
            out[rows, k] = off
        if ok:
            rows += 1
    return out[:rows]


@njit(inline="always")
def _find_close(traj, i, keys, offs, store, heads, nxt, ncells, wrap, E2, code, nb, m, D):
    K = keys.shape[1]
    mask = heads.shape[0] - 1
    for c in range(offs.shape[0]):
        h = np.int64(0)
        ok = True
        for k in range(K):
            v = keys[i, k] + offs[c, k]
            if v < 0 or v >= ncells[k]:
                if not wrap[k]:
                    ok = False
                    break
                v = v % ncells[k]
            h = (h * (ncells[k] & _KEY_MASK) + (v & _KEY_MASK)) & _KEY_MASK
        if not ok:
            continue
        j = heads[h & mask]
        while j >= 0:
            if _bowen_close(traj, i, store, j, E2, code, nb, m, D):
                return j
            j = nxt[j]
    return -1


@njit
def greedy_separated(traj, keys, ncells, wrap, E2, code, nb, m, D, store, heads, nxt, count, start):
    """Greedy (n, eps)-separated scan over ``traj[start:]``.

    Accepted trajectories are appended to ``store`` and chained into the hash
    ``heads``/``nxt`` by their cell keys. Returns ``(count, stop)``;
    ``stop < len(traj)`` means ``store`` is full and must be grown.
    """
    mask = heads.shape[0] - 1
    cap = store.shape[0]
    offs = _offset_table(ncells, wrap)
    for i in range(start, traj.shape[0]):
        if _find_close(traj, i, keys, offs, store, heads, nxt, ncells, wrap, E2, code, nb, m, D) >= 0:
            continue
        if count >= cap:
            return count, i
        store[count] = traj[i]
        b = _bucket(keys, i, ncells, mask)
        nxt[count] = heads[b]
        heads[b] = count
        count += 1
    return count, traj.shape[0]


@njit
def greedy_cover(traj, keys, nrows, la, ncells, wrap, E2, code, nb, m, D, store, heads, nxt, count, start):
    """Streaming greedy cover of ``traj[start:nrows]``.

    An uncovered target picks as centre the farthest row at most ``la`` ahead
    of it (rows past ``nrows`` are look-ahead only) that stays eps-close,
    found by galloping then bisection; the choice is verified before use.
    """
    mask = heads.shape[0] - 1
    cap = store.shape[0]
    offs = _offset_table(ncells, wrap)
    for i in range(start, nrows):
        last = min(i + la, traj.shape[0] - 1)
        if _find_close(traj, i, keys, offs, store, heads, nxt, ncells, wrap, E2, code, nb, m, D) >= 0:
            continue
        if count >= cap:
            return count, i
        good = 0
        step = 1
        bad = -1
        while i + step <= last:
            if _bowen_close(traj, i, traj, i + step, E2, code, nb, m, D):
                good = step
                step *= 2
            else:
                bad = step
                break
        if bad < 0:
            bad = last - i + 1
        lo, hi = good, bad
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if _bowen_close(traj, i, traj, i + mid, E2, code, nb, m, D):
                lo = mid
            else:
                hi = mid
        c = i + lo
        store[count] = traj[c]
        b = _bucket(keys, c, ncells, mask)
        nxt[count] = heads[b]
        heads[b] = count
        count += 1
    return count, nrows


@njit
def rebuild_hash(keys, ncells, heads, nxt, count):
    """Re-chain the first ``count`` stored entries after the table is resized."""
    mask = heads.shape[0] - 1
    heads[:] = -1
    for j in range(count):
        b = _bucket(keys, j, ncells, mask)
        nxt[j] = heads[b]
        heads[b] = j


def _cross_dist2(A, B, code, nb, m, D):
    out = np.empty((A.shape[0], B.shape[0]), np.int64)
    for i in range(A.shape[0]):
        for j in range(B.shape[0]):
            out[i, j] = state_dist2(A[i], B[j], code, nb, m, D)
    return out


cross_dist2_loop = _cross_dist2
cross_dist2_jit = njit(_cross_dist2)


def cross_dist2_numpy(A, B, code, nb, m, D):
    """Vectorised twin of the cross-distance kernel for the point metrics."""
    if code == ARC_CODE:
        return cross_dist2_loop(A, B, code, nb, m, D)
    A = A.reshape(A.shape[0], nb, m)
    B = B.reshape(B.shape[0], nb, m)
    diff = np.abs(A[:, None, :, :, None] - B[None, :, :, None, :])
    if code == CIRCLE_CODE:
        diff = diff % D
        diff = np.minimum(diff, D - diff)
    ab = diff.min(axis=4).max(axis=3)
    ba = diff.min(axis=3).max(axis=3)
    return 2 * np.maximum(ab, ba).max(axis=2)


def cross_dist2(A, B, code, nb, m, D):
    """Doubled distance matrix between encoded state arrays ``A`` and ``B``."""
    A = np.ascontiguousarray(A)
    B = np.ascontiguousarray(B)
    if USE_NUMBA:
        return cross_dist2_jit(A, B, code, nb, m, D)
    return cross_dist2_numpy(A, B, code, nb, m, D)


def _bowen_cross2(TA, TB, code, nb, m, D):
    # max over time of the doubled distance, for every pair of trajectories
    out = np.zeros((TA.shape[0], TB.shape[0]), np.int64)
    for i in range(TA.shape[0]):
        for j in range(TB.shape[0]):
            best = 0
            for t in range(TA.shape[1]):
                d = traj_dist2(TA, i, TB, j, t, code, nb, m, D)
                if d > best:
                    best = d
            out[i, j] = best
    return out


bowen_cross2_loop = _bowen_cross2
bowen_cross2_jit = njit(_bowen_cross2)


def bowen_cross2(TA, TB, code, nb, m, D):
    """Doubled Bowen distance ``max_t d(TA[i, t], TB[j, t])`` for all pairs."""
    if USE_NUMBA:
        return bowen_cross2_jit(np.ascontiguousarray(TA), np.ascontiguousarray(TB), code, nb, m, D)
    if code == ARC_CODE:
        return bowen_cross2_loop(TA, TB, code, nb, m, D)
    out = np.zeros((TA.shape[0], TB.shape[0]), np.int64)
    for t in range(TA.shape[1]):
        np.maximum(out, cross_dist2_numpy(TA[:, t], TB[:, t], code, nb, m, D), out=out)
    return out
