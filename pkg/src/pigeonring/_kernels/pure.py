"""Pure-Python implementations of the hot kernels.

The native (Cython) module mirrors this API exactly; callers import
whichever the package selected at import time.  All quota comparisons
for the fixed-quota mode are done by cross-multiplication (m*sum vs
l*n) so integer inputs are compared exactly.
"""

IMPL = "pure"

# quota kinds
KIND_FIXED = 0
KIND_VARIABLE = 1
KIND_INTRED = 2


def chain_fail_len(boxes, m, start, l, kind, n, thresholds, at_most):
    """Prefix-viability check for the chain of length ``l`` at ``start``.

    Returns 0 when every prefix is viable, otherwise the smallest
    failing prefix length (used for the ring skip rule).
    """
    s = 0
    tsum = 0
    for k in range(l):
        j = start + k
        if j >= m:
            j -= m
        s += boxes[j]
        lp = k + 1
        if kind == KIND_FIXED:
            ok = (m * s <= lp * n) if at_most else (m * s >= lp * n)
        else:
            tsum += thresholds[j]
            if kind == KIND_VARIABLE:
                quota = tsum
            elif at_most:
                quota = tsum + lp - 1
            else:
                quota = tsum + 1 - lp
            ok = (s <= quota) if at_most else (s >= quota)
        if not ok:
            return lp
    return 0


def hamming_chain_fail_len(parts, row, qparts, m, start, l, kind, n, thresholds):
    """Like ``chain_fail_len`` with boxes computed on the fly as popcounts.

    ``parts`` is an (N, m) array of packed part values, ``qparts`` the
    query's m part values.  Hamming search always filters in the
    at-most direction.
    """
    s = 0
    tsum = 0
    for k in range(l):
        j = start + k
        if j >= m:
            j -= m
        s += (int(parts[row, j]) ^ int(qparts[j])).bit_count()
        lp = k + 1
        if kind == KIND_FIXED:
            ok = m * s <= lp * n
        else:
            tsum += thresholds[j]
            quota = tsum + lp - 1 if kind == KIND_INTRED else tsum
            ok = s <= quota
        if not ok:
            return lp
    return 0


def hamming_distance(parts, row, qparts, m):
    """Full Hamming distance between data row and query, over all parts."""
    total = 0
    for j in range(m):
        total += (int(parts[row, j]) ^ int(qparts[j])).bit_count()
    return total


def banded_ed_within(x, y, tau):
    """True iff the edit distance of byte strings x, y is at most tau.

    (2*tau+1)-banded dynamic programming with an early exit when the
    whole band exceeds tau.
    """
    nx = len(x)
    ny = len(y)
    if nx > ny:
        x, y = y, x
        nx, ny = ny, nx
    if ny - nx > tau:
        return False
    big = tau + 1
    # prev[k] = D[i-1][i-1+k-tau] for k in 0..2*tau
    width = 2 * tau + 1
    prev = [big] * width
    for k in range(width):
        j = k - tau
        if 0 <= j <= ny:
            prev[k] = j
    for i in range(1, nx + 1):
        cur = [big] * width
        row_min = big
        for k in range(width):
            j = i + k - tau
            if j < 0 or j > ny:
                continue
            if j == 0:
                cur[k] = i
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
        prev = cur
    return prev[ny - nx + tau] <= tau


def sig_window_min(lo, hi, u0, u1, glo, ghi):
    """Minimum signature Hamming distance of a gram against windows u0..u1.

    ``lo``/``hi`` hold the low/high 64 bits of each window signature;
    ``glo``/``ghi`` are the gram's signature halves.
    """
    best = 129
    glo = int(glo)
    ghi = int(ghi)
    for u in range(u0, u1 + 1):
        h = (int(lo[u]) ^ glo).bit_count() + (int(hi[u]) ^ ghi).bit_count()
        if h < best:
            best = h
            if best == 0:
                break
    return best
