"""Set similarity search with class-partitioned prefixes.

Tokens are globally ordered by increasing frequency and the universe is
partitioned into m-1 classes.  Each record contributes a prefix (the
shortest head of its sorted token list satisfying the class-count
equation) whose tokens are indexed.  The ring for a pair is
(b_0, b_1, .., b_{m-1}): b_0 the suffix overlap, b_k the class-k prefix
overlap, so the box sum equals the full overlap.  Filtering runs in the
at-least direction with integer reduction.  The suffix box is never
evaluated -- that would cost as much as verifying -- so chains use its
cheap upper bound (the suffix size of whichever side owns it under the
probing rule); optimism there keeps the filter complete while still
pruning, at the price of tightness.
"""

import time
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction

from .stats import QueryStats


def overlap_threshold(nx: int, nq: int, tau_j) -> int:
    """Smallest overlap implying Jaccard >= tau_j for sizes nx, nq.

    J(x,q) >= t  iff  |x n q| >= (nx+nq)*t/(1+t); evaluated with exact
    rational arithmetic.
    """
    t = Fraction(tau_j)
    if not 0 < t <= 1:
        raise ValueError("jaccard threshold must be in (0, 1]")
    num = (nx + nq) * t.numerator
    den = t.denominator + t.numerator
    return -((-num) // den)  # ceil


@dataclass(frozen=True)
class TokenDictionary:
    """token -> dense id in global order (increasing frequency, ties by
    first appearance)."""

    ids: dict
    freqs: tuple

    @classmethod
    def build(cls, records) -> "TokenDictionary":
        freq = {}
        first = {}
        pos = 0
        for rec in records:
            for tok in rec:
                freq[tok] = freq.get(tok, 0) + 1
                if tok not in first:
                    first[tok] = pos
                    pos += 1
        order = sorted(freq, key=lambda t: (freq[t], first[t]))
        ids = {tok: i for i, tok in enumerate(order)}
        return cls(ids=ids, freqs=tuple(freq[tok] for tok in order))

    def encode(self, tokens):
        """Sorted ids for one record; unseen tokens get distinct negative
        ids (rarest end of the order, matching nothing)."""
        out = []
        unseen = -1
        for tok in set(tokens):
            i = self.ids.get(tok)
            if i is None:
                out.append(unseen)
                unseen -= 1
            else:
                out.append(i)
        out.sort()
        return out


@dataclass(frozen=True)
class ClassMap:
    """Partition of the id order into classes 1..m-1 (contiguous ranges;
    bounds[k-1] is the last id of class k)."""

    bounds: tuple
    m: int

    @classmethod
    def build(cls, dictionary: TokenDictionary, m: int) -> "ClassMap":
        if m < 2:
            raise ValueError("need at least 2 boxes (one class)")
        n_classes = m - 1
        freqs = dictionary.freqs
        total = sum(freqs) or 1
        bounds = []
        acc = 0
        k = 1
        for i, f in enumerate(freqs):
            acc += f
            if k < n_classes and acc * n_classes >= k * total:
                bounds.append(i)
                k += 1
        last = len(freqs) - 1
        while len(bounds) < n_classes:
            bounds.append(last)
        return cls(bounds=tuple(bounds), m=m)

    def of(self, token_id: int) -> int:
        if token_id < 0:
            return 1
        return bisect_left(self.bounds, token_id) + 1


@dataclass(frozen=True)
class RecordView:
    """Sorted ids, prefix length, and per-class prefix counts."""

    ids: tuple
    prefix_len: int
    class_counts: tuple  # index k-1 holds cnt(x, p, k)


def compute_prefix(ids, tau_ov: int, classmap: ClassMap):
    """Smallest prefix p with sum_k max(0, cnt(p,k)-k+1) = |x|-tau+1.

    Returns None when the equation cannot be satisfied even at p=|x|
    (callers fall back to direct verification).
    """
    if tau_ov <= 0:
        raise ValueError("overlap threshold must be positive")
    size = len(ids)
    if tau_ov > size:
        return RecordView(ids=tuple(ids), prefix_len=0, class_counts=(0,) * (classmap.m - 1))
    target = size - tau_ov + 1
    counts = [0] * (classmap.m - 1)
    score = 0
    for p, tid in enumerate(ids, start=1):
        k = classmap.of(tid)
        counts[k - 1] += 1
        if counts[k - 1] >= k:
            score += 1
        if score == target:
            return RecordView(ids=tuple(ids), prefix_len=p, class_counts=tuple(counts))
    return None


def query_thresholds(view: RecordView, m: int, tau_ov: int):
    """Integer-reduction thresholds T for the at-least direction.

    t_0 covers the suffix, t_k the class-k prefix box; their sum is
    tau + m - 1 whenever the prefix equation held exactly.
    """
    t = [len(view.ids) - view.prefix_len + 1]
    for k in range(1, m):
        c = view.class_counts[k - 1]
        t.append(k if c >= k else c + 1)
    total = sum(t)
    expect = tau_ov + m - 1
    if total != expect:
        raise AssertionError(
            f"threshold sum {total} != tau+m-1 = {expect}; prefix computation bug"
        )
    return tuple(t)


def _class_overlaps(x_view: RecordView, q_view: RecordView, classmap: ClassMap):
    """b_k = |x_k n q_k| for k = 1..m-1, merging the two sorted prefixes."""
    b = [0] * classmap.m
    xi = x_view.ids[: x_view.prefix_len]
    qi = q_view.ids[: q_view.prefix_len]
    i = j = 0
    while i < len(xi) and j < len(qi):
        if xi[i] == qi[j]:
            b[classmap.of(xi[i])] += 1
            i += 1
            j += 1
        elif xi[i] < qi[j]:
            i += 1
        else:
            j += 1
    return b


def _chain_fail_len(b, t, m, start, l):
    """At-least integer-reduction prefix viability; 0 when every prefix
    passes, else the smallest failing prefix length."""
    s = 0
    tsum = 0
    for k in range(l):
        j = (start + k) % m
        s += b[j]
        tsum += t[j]
        if s < tsum + 1 - (k + 1):
            return k + 1
    return 0


def _overlap(a, b):
    i = j = ov = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            ov += 1
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    return ov


class SetIndex:
    """Inverted index over index-time prefix tokens.

    Built either for a Jaccard threshold (per-record local bound
    tau_x = ceil(tau_j * |x|)) or for a fixed overlap threshold.
    """

    def __init__(self, records, m: int, tau_j=None, tau_ov=None):
        if (tau_j is None) == (tau_ov is None):
            raise ValueError("exactly one of tau_j / tau_ov must be given")
        self.m = m
        self.tau_j = None if tau_j is None else Fraction(tau_j)
        self.tau_ov = tau_ov
        self.dictionary = TokenDictionary.build(records)
        self.classmap = ClassMap.build(self.dictionary, m)
        self.views = []       # per record: sorted id tuple
        self.inverted = {}    # token id -> [oid, ...]
        for oid, rec in enumerate(records):
            ids = tuple(self.dictionary.encode(rec))
            self.views.append(ids)
            if not ids:
                continue
            if self.tau_j is not None:
                # ceil(tau_j * |x|): the overlap needed against the
                # smallest admissible partner, so the widest prefix
                local = -((-len(ids) * self.tau_j.numerator) // self.tau_j.denominator)
            else:
                local = self.tau_ov
            if local > len(ids):
                continue  # record can never reach the threshold
            view = compute_prefix(ids, local, self.classmap)
            plen = len(ids) if view is None else view.prefix_len
            for tid in ids[:plen]:
                self.inverted.setdefault(tid, []).append(oid)

    def _pair_tau(self, nx: int, nq: int) -> int:
        if self.tau_j is not None:
            return overlap_threshold(nx, nq, self.tau_j)
        return self.tau_ov

    def query(self, q_tokens, l: int):
        """Exact search: ids of records meeting the similarity threshold."""
        m = self.m
        if not 1 <= l <= m:
            raise ValueError(f"chain length {l} outside [1..{m}]")
        tau_j = self.tau_j
        q_ids = self.dictionary.encode(q_tokens)
        nq = len(q_ids)
        stats = QueryStats()
        t0 = time.perf_counter()
        if nq == 0:
            return [], stats

        if self.tau_j is not None:
            lo = -((-nq * tau_j.numerator) // tau_j.denominator)  # ceil(tau*|q|)
            hi = (nq * tau_j.denominator) // tau_j.numerator       # floor(|q|/tau)
            size_ok = lambda nx: lo <= nx <= hi
            tau_seed = self._pair_tau(max(lo, 1), nq)
        else:
            size_ok = lambda nx: nx >= self.tau_ov
            tau_seed = self.tau_ov

        # seeding: probe the inverted lists of the widest query prefix
        seeds = set()
        scan_all = False
        if tau_seed > nq:
            return [], stats
        seed_view = compute_prefix(q_ids, tau_seed, self.classmap)
        if seed_view is None:
            scan_all = True  # rare: prefix equation unsatisfiable
        if scan_all:
            seeds = {oid for oid, ids in enumerate(self.views) if size_ok(len(ids))}
        else:
            for tid in q_ids[: seed_view.prefix_len]:
                stats.probes += 1
                for oid in self.inverted.get(tid, ()):
                    seeds.add(oid)
        t1 = time.perf_counter()

        cand = []
        q_view_cache = {}
        for oid in sorted(seeds):
            x_ids = self.views[oid]
            nx = len(x_ids)
            if not size_ok(nx):
                continue
            tau_p = self._pair_tau(nx, nq)
            if tau_p > min(nx, nq):
                continue
            if tau_p not in q_view_cache:
                qv = compute_prefix(q_ids, tau_p, self.classmap)
                tq = None if qv is None else query_thresholds(qv, m, tau_p)
                q_view_cache[tau_p] = (qv, tq)
            q_view, t = q_view_cache[tau_p]
            x_view = compute_prefix(x_ids, tau_p, self.classmap)
            if q_view is None or x_view is None:
                cand.append((oid, tau_p))  # equation unsatisfiable: verify directly
                continue
            b = _class_overlaps(x_view, q_view, self.classmap)
            viable = [k for k in range(1, m) if b[k] >= t[k]]
            if not viable:
                continue  # a result always owns a viable class box
            stats.viable_boxes += len(viable)
            stats.candidates_l1 += 1
            if l == 1:
                cand.append((oid, tau_p))
                continue
            # the suffix box is never evaluated; chains use its upper
            # bound, the suffix size of the side the probing rule picks
            x_last = x_view.ids[x_view.prefix_len - 1]
            q_last = q_view.ids[q_view.prefix_len - 1]
            if x_last < q_last:
                b[0] = len(x_view.ids) - x_view.prefix_len
            else:
                b[0] = len(q_view.ids) - q_view.prefix_len
            passed = False
            mask = 0
            for i in range(m):
                if mask >> i & 1:
                    continue
                fl = _chain_fail_len(b, t, m, i, l)
                stats.box_checks += l if fl == 0 else fl
                if fl == 0:
                    passed = True
                    break
                for k in range(1, fl):
                    mask |= 1 << ((i + k) % m)
            if passed:
                cand.append((oid, tau_p))
        stats.candidates = len(cand)
        t2 = time.perf_counter()

        results = []
        for oid, tau_p in cand:
            stats.verifications += 1
            if _overlap(self.views[oid], q_ids) >= tau_p:
                results.append(oid)
        stats.results = len(results)
        t3 = time.perf_counter()
        stats.time_probe = t1 - t0
        stats.time_chain = t2 - t1
        stats.time_verify = t3 - t2
        return results, stats
