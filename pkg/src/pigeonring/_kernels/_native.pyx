# cython: boundscheck=False, wraparound=False, cdivision=True
"""Native implementations of the hot kernels (see pure.py for the contract)."""

from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #define PR_POPCOUNT64(x) __builtin_popcountll(x)
    #else
    static int PR_POPCOUNT64(unsigned long long v) {
        int c = 0;
        while (v) { v &= v - 1; c++; }
        return c;
    }
    #endif
    """
    int PR_POPCOUNT64(unsigned long long v) nogil

IMPL = "native"

KIND_FIXED = 0
KIND_VARIABLE = 1
KIND_INTRED = 2


def chain_fail_len(double[::1] boxes, int m, int start, int l,
                   int kind, double n, thresholds, bint at_most):
    cdef double[::1] tview
    cdef double s = 0.0, tsum = 0.0, quota
    cdef int k, j, lp
    cdef bint ok
    if kind != 0:
        tview = thresholds
    for k in range(l):
        j = start + k
        if j >= m:
            j -= m
        s += boxes[j]
        lp = k + 1
        if kind == 0:
            ok = (m * s <= lp * n) if at_most else (m * s >= lp * n)
        else:
            tsum += tview[j]
            if kind == 1:
                quota = tsum
            elif at_most:
                quota = tsum + lp - 1
            else:
                quota = tsum + 1 - lp
            ok = (s <= quota) if at_most else (s >= quota)
        if not ok:
            return lp
    return 0


def hamming_chain_fail_len(unsigned long long[:, ::1] parts, Py_ssize_t row,
                           unsigned long long[::1] qparts, int m, int start,
                           int l, int kind, long n, thresholds):
    cdef long[::1] tview
    cdef long s = 0, tsum = 0, quota
    cdef int k, j, lp
    cdef bint ok
    if kind != 0:
        tview = thresholds
    for k in range(l):
        j = start + k
        if j >= m:
            j -= m
        s += PR_POPCOUNT64(parts[row, j] ^ qparts[j])
        lp = k + 1
        if kind == 0:
            ok = m * s <= lp * n
        else:
            tsum += tview[j]
            if kind == 2:
                quota = tsum + lp - 1
            else:
                quota = tsum
            ok = s <= quota
        if not ok:
            return lp
    return 0


def hamming_distance(unsigned long long[:, ::1] parts, Py_ssize_t row,
                     unsigned long long[::1] qparts, int m):
    cdef long total = 0
    cdef int j
    for j in range(m):
        total += PR_POPCOUNT64(parts[row, j] ^ qparts[j])
    return total


def banded_ed_within(const unsigned char[:] x, const unsigned char[:] y, int tau):
    cdef Py_ssize_t nx = x.shape[0]
    cdef Py_ssize_t ny = y.shape[0]
    cdef const unsigned char[:] tmp
    if nx > ny:
        tmp = x; x = y; y = tmp
        nx, ny = ny, nx
    if ny - nx > tau:
        return False
    cdef int width = 2 * tau + 1
    cdef int big = tau + 1
    cdef int *prev = <int *> malloc(width * sizeof(int))
    cdef int *cur = <int *> malloc(width * sizeof(int))
    if prev == NULL or cur == NULL:
        free(prev); free(cur)
        raise MemoryError()
    cdef int k, best, row_min
    cdef Py_ssize_t i, j
    cdef int *swap
    cdef bint result
    try:
        for k in range(width):
            j = k - tau
            prev[k] = <int> j if 0 <= j <= ny else big
        for i in range(1, nx + 1):
            row_min = big
            for k in range(width):
                j = i + k - tau
                if j < 0 or j > ny:
                    cur[k] = big
                    continue
                if j == 0:
                    cur[k] = <int> i
                else:
                    best = prev[k] + (0 if x[i - 1] == y[j - 1] else 1)
                    if k > 0 and cur[k - 1] + 1 < best:
                        best = cur[k - 1] + 1
                    if k < width - 1 and prev[k + 1] + 1 < best:
                        best = prev[k + 1] + 1
                    cur[k] = best if best < big else big
                if cur[k] < row_min:
                    row_min = cur[k]
            if row_min > tau:
                return False
            swap = prev; prev = cur; cur = swap
        result = prev[ny - nx + tau] <= tau
        return result
    finally:
        free(prev)
        free(cur)


def sig_window_min(unsigned long long[::1] lo, unsigned long long[::1] hi,
                   Py_ssize_t u0, Py_ssize_t u1,
                   unsigned long long glo, unsigned long long ghi):
    cdef int best = 129
    cdef int h
    cdef Py_ssize_t u
    for u in range(u0, u1 + 1):
        h = PR_POPCOUNT64(lo[u] ^ glo) + PR_POPCOUNT64(hi[u] ^ ghi)
        if h < best:
            best = h
            if best == 0:
                break
    return best
