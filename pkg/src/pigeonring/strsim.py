"""String similarity search under edit distance.

Strings are summarised by their kappa-grams.  For a threshold tau, a
string's prefix is its kappa*tau+1 gram occurrences that come first in
the global gram order (increasing frequency, ties by gram bytes, then
position); tau+1 position-disjoint pivotal grams are chosen from the
prefix.  The ring has m = tau+1 boxes, one per pivotal gram: box i
lower-bounds the edit operations that touch the region of pivotal gram
i, as half the minimum signature Hamming distance over the kappa-wide
windows of the other string whose start differs by at most tau.  The
box sum lower-bounds the edit distance, so filtering uses the fixed
quota l*tau/(tau+1) in the at-most direction.

Signatures are symbol sets: bit j is set when some byte of the
substring hashes to j.  One edit operation flips at most two bits, and
that stays true under insertions and deletions because the signature
ignores positions.

Which side contributes the pivotal grams follows the probing rule: the
side whose last prefix gram comes earlier in the global order (ties go
to the data side).  A result within distance tau always has a pivotal
gram appearing exactly, with start shift at most tau, among the other
side's prefix grams -- those exact matches are what the inverted maps
probe, and each match opens a chain at that pivot (its box is zero;
the first box of any prefix-viable chain must be, since the length-1
quota tau/(tau+1) is below one).
"""

import time

import numpy as np

from . import _kernels
from .stats import QueryStats

KAPPA_DEFAULT = 2
_SIG_BITS = 128


def grams(s: bytes, kappa: int):
    """All kappa-gram occurrences of s as (gram, position)."""
    return [(s[i:i + kappa], i) for i in range(len(s) - kappa + 1)]


class GramOrder:
    """Global gram order: increasing collection frequency, ties by bytes.

    Grams never seen in the collection are the rarest and sort first.
    """

    def __init__(self, strings, kappa: int):
        self.kappa = kappa
        freq = {}
        for s in strings:
            for g, _ in grams(s, kappa):
                freq[g] = freq.get(g, 0) + 1
        self._freq = freq

    def key(self, gram: bytes):
        return (self._freq.get(gram, 0), gram)


def extract_prefix(s: bytes, tau: int, order: GramOrder):
    """The kappa*tau+1 first gram occurrences in global order (ties by
    position), or None when s has fewer grams than that."""
    occs = grams(s, order.kappa)
    need = order.kappa * tau + 1
    if len(occs) < need:
        return None
    occs.sort(key=lambda gp: (order.key(gp[0]), gp[1]))
    return occs[:need]


def select_pivotal(prefix_occs, tau: int, kappa: int):
    """tau+1 position-disjoint grams from the prefix, in position order.

    Greedy in global order first; if that leaves fewer than tau+1, the
    earliest-end sweep over the prefix always finds tau+1 (each pick
    excludes at most kappa of the kappa*tau+1 distinct start positions).
    """
    want = tau + 1
    chosen = []
    for g, p in prefix_occs:
        if all(abs(p - cp) >= kappa for _, cp in chosen):
            chosen.append((g, p))
            if len(chosen) == want:
                return sorted(chosen, key=lambda gp: gp[1])
    chosen = []
    last_end = None
    for g, p in sorted(prefix_occs, key=lambda gp: gp[1]):
        if last_end is None or p >= last_end:
            chosen.append((g, p))
            last_end = p + kappa
            if len(chosen) == want:
                return chosen
    raise AssertionError("prefix cannot yield tau+1 disjoint grams")


def _sig_bit(byte_val: int) -> int:
    return (byte_val * 2654435761 % (1 << 32)) >> 25


def signature(chunk: bytes) -> tuple:
    """128-bit symbol-set signature as (low, high) uint64 halves."""
    a = b = 0
    for c in chunk:
        bit = _sig_bit(c)
        if bit < 64:
            a |= 1 << bit
        else:
            b |= 1 << (bit - 64)
    return a, b


def window_signatures(s: bytes, kappa: int):
    """Signatures of every kappa-window of s as two uint64 arrays; entry
    u covers s[u:u+kappa]."""
    n = max(len(s) - kappa + 1, 0)
    lo = np.zeros(n, dtype=np.uint64)
    hi = np.zeros(n, dtype=np.uint64)
    for u in range(n):
        a, b = signature(s[u:u + kappa])
        lo[u] = a
        hi[u] = b
    return lo, hi


def box_lower_bound(other: bytes, sigs, gram: bytes, gpos: int, tau: int, kappa: int) -> float:
    """Lower bound on the edit operations touching one pivotal gram's
    region: half the minimum signature Hamming distance over windows of
    the other string whose start differs by at most tau.

    A zero signature distance is confirmed byte-wise; a colliding
    non-match still costs at least one operation, reported as 0.5 to
    stay on the half-integer grid the signature bound lives on.
    """
    lo, hi = sigs
    u0 = max(0, gpos - tau)
    u1 = min(len(other) - kappa, gpos + tau)
    if u1 < u0:
        return 1.0  # no aligned window exists; some operation must act here
    glo, ghi = signature(gram)
    h = _kernels.sig_window_min(lo, hi, u0, u1, glo, ghi)
    if h == 0:
        for u in range(u0, u1 + 1):
            if other[u:u + kappa] == gram:
                return 0.0
        return 0.5
    return h / 2.0


def verify_edit_distance(x: bytes, y: bytes, tau: int) -> bool:
    """ed(x, y) <= tau, by banded dynamic programming."""
    if tau < 0:
        return False
    if tau == 0:
        return x == y
    return bool(_kernels.banded_ed_within(x, y, tau))


class _Bucket:
    """Per-tau probing structures for strings long enough for the scheme."""

    def __init__(self):
        self.last_key = {}      # oid -> order key of the last prefix gram
        self.pivotal = {}       # oid -> [(gram, pos)] in position order
        self.pivotal_map = {}   # gram -> [(oid, pivot_index, pos)]
        self.prefix_map = {}    # gram -> [(oid, pos)]


class StringIndex:
    """Exact thresholded search for edit distance up to tau_max."""

    def __init__(self, strings, tau_max: int, kappa: int = KAPPA_DEFAULT,
                 order: GramOrder | None = None):
        if tau_max < 0:
            raise ValueError("tau_max must be nonnegative")
        if kappa < 1:
            raise ValueError("kappa must be positive")
        self.strings = [bytes(s) for s in strings]
        self.tau_max = tau_max
        self.kappa = kappa
        self.order = order if order is not None else GramOrder(self.strings, kappa)
        if self.order.kappa != kappa:
            raise ValueError("gram order was built for a different kappa")
        self.exact = {}
        for oid, s in enumerate(self.strings):
            self.exact.setdefault(s, []).append(oid)
        self._sigs = {}
        self._buckets = {}
        self._short = {}  # tau -> [oid] strings with fewer than kappa*tau+1 grams
        for tau in range(1, tau_max + 1):
            bucket = _Bucket()
            short = []
            for oid, s in enumerate(self.strings):
                pre = extract_prefix(s, tau, self.order)
                if pre is None:
                    short.append(oid)
                    continue
                bucket.last_key[oid] = self.order.key(pre[-1][0])
                piv = select_pivotal(pre, tau, kappa)
                bucket.pivotal[oid] = piv
                for i, (g, p) in enumerate(piv):
                    bucket.pivotal_map.setdefault(g, []).append((oid, i, p))
                for g, p in pre:
                    bucket.prefix_map.setdefault(g, []).append((oid, p))
            self._buckets[tau] = bucket
            self._short[tau] = short

    def signatures(self, oid: int):
        if oid not in self._sigs:
            self._sigs[oid] = window_signatures(self.strings[oid], self.kappa)
        return self._sigs[oid]

    def _boxes(self, pivotal, other: bytes, other_sigs, tau: int):
        return [
            box_lower_bound(other, other_sigs, g, p, tau, self.kappa)
            for g, p in pivotal
        ]

    def query(self, q: bytes, tau: int, l: int):
        """Ids of strings within edit distance tau of q, plus stats."""
        q = bytes(q)
        if not 0 <= tau <= self.tau_max:
            raise ValueError(f"tau={tau} outside [0..{self.tau_max}]")
        stats = QueryStats()
        if tau == 0:
            ids = sorted(self.exact.get(q, []))
            stats.probes = 1
            stats.candidates = stats.verifications = stats.results = len(ids)
            stats.candidates_l1 = len(ids)
            return ids, stats
        m = tau + 1
        if not 1 <= l <= m:
            raise ValueError(f"chain length {l} outside [1..{m}]")
        bucket = self._buckets[tau]
        t0 = time.perf_counter()

        q_pre = extract_prefix(q, tau, self.order)
        cand = set()
        # seeds: oid -> (data side is pivotal?, matched pivot indices)
        seeds = {}
        if q_pre is None:
            # query too short for the scheme: verify everything in range
            for oid, s in enumerate(self.strings):
                if abs(len(s) - len(q)) <= tau:
                    cand.add(oid)
            t1 = time.perf_counter()
        else:
            q_last = self.order.key(q_pre[-1][0])
            q_piv = select_pivotal(q_pre, tau, self.kappa)
            q_sigs = window_signatures(q, self.kappa)
            # probe A: query prefix grams against data pivotal grams
            # (data side is pivotal when its last prefix gram does not
            # come after the query's -- ties go to the data side)
            for g, qp in q_pre:
                stats.probes += 1
                for oid, i, xp in bucket.pivotal_map.get(g, ()):
                    if abs(xp - qp) <= tau and bucket.last_key[oid] <= q_last:
                        seeds.setdefault(oid, (True, set()))[1].add(i)
            # probe B: query pivotal grams against data prefix grams
            for i, (g, qp) in enumerate(q_piv):
                stats.probes += 1
                for oid, xp in bucket.prefix_map.get(g, ()):
                    if abs(xp - qp) <= tau and bucket.last_key[oid] > q_last:
                        seeds.setdefault(oid, (False, set()))[1].add(i)
            # strings too short for the scheme are always verified
            for oid in self._short[tau]:
                if abs(len(self.strings[oid]) - len(q)) <= tau:
                    cand.add(oid)
            t1 = time.perf_counter()

            for oid in sorted(seeds):
                data_pivotal, starts = seeds[oid]
                x = self.strings[oid]
                if abs(len(x) - len(q)) > tau:
                    continue
                stats.viable_boxes += len(starts)
                stats.candidates_l1 += 1
                if l == 1:
                    cand.add(oid)
                    continue
                if data_pivotal:
                    boxes = self._boxes(bucket.pivotal[oid], q, q_sigs, tau)
                else:
                    boxes = self._boxes(q_piv, x, self.signatures(oid), tau)
                barr = np.asarray(boxes, dtype=np.float64)
                mask = 0
                for i in sorted(starts):
                    if mask >> i & 1:
                        continue
                    fl = _kernels.chain_fail_len(
                        barr, m, i, l, _kernels.KIND_FIXED, float(tau), None, True
                    )
                    stats.box_checks += l if fl == 0 else fl
                    if fl == 0:
                        cand.add(oid)
                        break
                    for k in range(fl):
                        mask |= 1 << ((i + k) % m)
        stats.candidates = len(cand)
        t2 = time.perf_counter()

        results = []
        for oid in sorted(cand):
            stats.verifications += 1
            if verify_edit_distance(self.strings[oid], q, tau):
                results.append(oid)
        stats.results = len(results)
        t3 = time.perf_counter()
        stats.time_probe = t1 - t0
        stats.time_chain = t2 - t1
        stats.time_verify = t3 - t2
        return results, stats
