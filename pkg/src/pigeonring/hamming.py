"""Hamming distance search over fixed-dimension binary vectors.

Vectors are split into m contiguous disjoint parts; each part's
popcount of XOR against the query is one box, so the box sum equals
the full Hamming distance.  Step 1 probes per-part exact-match maps
with a radius-t_i ball around the query part; step 2 extends a chain
from every probed viable box and keeps only prefix-viable objects,
which are then verified exactly.
"""

import time
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _kernels
from .ring import AT_MOST, FIXED, INTRED, VARIABLE, ThresholdSpec
from .stats import QueryStats

_KIND = {FIXED: _kernels.KIND_FIXED, VARIABLE: _kernels.KIND_VARIABLE, INTRED: _kernels.KIND_INTRED}


@dataclass(frozen=True)
class PartLayout:
    d: int
    widths: tuple

    @property
    def m(self):
        return len(self.widths)

    def boundaries(self):
        out = []
        s = 0
        for w in self.widths:
            out.append((s, s + w))
            s += w
        return out


def partition_dims(d: int, m: int) -> PartLayout:
    """Contiguous equi-width (+-1) parts covering all d dimensions."""
    if not 1 <= m <= d:
        raise ValueError(f"part count {m} outside [1..{d}]")
    base, extra = divmod(d, m)
    widths = tuple(base + 1 if i < extra else base for i in range(m))
    return PartLayout(d, widths)


def default_part_count(d: int) -> int:
    return max(1, d // 16)


def allocate_thresholds(tau: int, m: int) -> ThresholdSpec:
    """Even integer-reduction split: sum(T) = tau - m + 1 exactly.

    Requires tau >= m - 1 so no entry goes negative; callers shrink m
    to tau + 1 first (see effective_part_count).
    """
    if tau < 0:
        raise ValueError("tau must be a nonnegative integer")
    if tau < m - 1:
        raise ValueError(f"tau={tau} < m-1={m - 1}: reduce the part count to tau+1")
    total = tau - m + 1
    base, extra = divmod(total, m)
    t = tuple(base + 1 if i < extra else base for i in range(m))
    return ThresholdSpec.integer_reduction(t, AT_MOST)


def effective_part_count(tau: int, m: int) -> int:
    """Shrink m so the even integer-reduction split stays nonnegative."""
    return min(m, tau + 1) if tau >= 0 else 1


def pack_bits(bits: np.ndarray, layout: PartLayout) -> np.ndarray:
    """Pack an (N, d) 0/1 array into (N, m) part values (first dimension
    of a part is its most significant bit).  Part width is capped at 64."""
    if bits.ndim == 1:
        bits = bits[None, :]
    if bits.shape[1] != layout.d:
        raise ValueError(f"dimension mismatch: {bits.shape[1]} != {layout.d}")
    if max(layout.widths) > 64:
        raise ValueError("part width above 64 bits is not supported")
    n = bits.shape[0]
    out = np.zeros((n, layout.m), dtype=np.uint64)
    for i, (s, e) in enumerate(layout.boundaries()):
        w = e - s
        weights = np.left_shift(np.uint64(1), np.arange(w - 1, -1, -1, dtype=np.uint64))
        out[:, i] = bits[:, s:e].astype(np.uint64) @ weights
    return out


def ball(value: int, width: int, radius: int):
    """All part values within Hamming distance ``radius``, ordered by
    flip count."""
    yield value
    for r in range(1, radius + 1):
        for pos in combinations(range(width), r):
            v = value
            for p in pos:
                v ^= 1 << p
            yield v


def ball_size(width: int, radius: int) -> int:
    total = 0
    term = 1
    for r in range(min(radius, width) + 1):
        total += term
        term = term * (width - r) // (r + 1)
    return total


class HammingIndex:
    """Per-part exact-match maps plus the packed data matrix.

    Maps are built lazily per part count, so one index serves queries
    whose effective m differs (small tau shrinks m).
    """

    def __init__(self, bits: np.ndarray):
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.ndim != 2:
            raise ValueError("expected an (N, d) bit matrix")
        self.bits = bits
        self.n, self.d = bits.shape
        self._packed = {}

    def layout(self, m: int) -> PartLayout:
        return partition_dims(self.d, m)

    def packed(self, m: int):
        """(layout, parts matrix, per-part value->ids maps) for m parts."""
        if m not in self._packed:
            layout = self.layout(m)
            parts = pack_bits(self.bits, layout)
            maps = []
            for i in range(m):
                col = {}
                for oid, v in enumerate(parts[:, i].tolist()):
                    col.setdefault(v, []).append(oid)
                maps.append(col)
            self._packed[m] = (layout, parts, maps)
        return self._packed[m]

    def part_distance(self, oid: int, qbits: np.ndarray, m: int, i: int) -> int:
        layout, parts, _ = self.packed(m)
        qparts = pack_bits(qbits, layout)[0]
        return int(parts[oid, i] ^ qparts[i]).bit_count()

    def query(self, qbits, tau: int, l: int, mode: str = INTRED, spec: ThresholdSpec | None = None,
              parts: int | None = None):
        """Exact thresholded search: ids with H(x, q) <= tau, plus stats."""
        qbits = np.asarray(qbits, dtype=np.uint8).reshape(-1)
        if qbits.shape[0] != self.d:
            raise ValueError(f"query dimension {qbits.shape[0]} != {self.d}")
        if tau < 0:
            return [], QueryStats()
        m = parts if parts is not None else default_part_count(self.d)
        if spec is not None:
            mode = spec.mode
            if spec.thresholds is not None:
                m = len(spec.thresholds)
        elif mode == INTRED:
            m = effective_part_count(tau, m)
            spec = allocate_thresholds(tau, m)
        elif mode == FIXED:
            spec = ThresholdSpec.fixed(tau)
        else:
            raise ValueError("variable mode needs an explicit spec")
        m = min(m, self.d)
        l = min(l, m)
        layout, data_parts, maps = self.packed(m)
        qparts = pack_bits(qbits, layout)[0]

        if spec.mode == FIXED:
            radii = [tau // m] * m
        else:
            radii = [int(t) if t >= 0 else -1 for t in spec.thresholds]
        kind = _KIND[spec.mode]
        thresholds = (
            np.asarray(spec.thresholds, dtype=np.int64) if spec.thresholds is not None else None
        )

        stats = QueryStats()
        t0 = time.perf_counter()
        hits = []  # (object id, part index)
        seen_l1 = set()
        for i in range(m):
            r = radii[i]
            if r < 0:
                continue
            w = layout.widths[i]
            col = maps[i]
            r = min(r, w)
            qv = int(qparts[i])
            if ball_size(w, r) <= len(col):
                for val in ball(qv, w, r):
                    stats.probes += 1
                    ids = col.get(val)
                    if ids:
                        for oid in ids:
                            hits.append((oid, i))
                            seen_l1.add(oid)
            else:
                # the ball is larger than the distinct part values: scan
                # the map instead, which finds the same hits
                for val, ids in col.items():
                    stats.probes += 1
                    if (val ^ qv).bit_count() <= r:
                        for oid in ids:
                            hits.append((oid, i))
                            seen_l1.add(oid)
        stats.ball_size = stats.probes
        stats.viable_boxes = len(hits)
        stats.candidates_l1 = len(seen_l1)
        t1 = time.perf_counter()

        cand = set()
        skip = {}
        n_int = int(tau)
        for oid, i in hits:
            if oid in cand:
                continue
            mask = skip.get(oid, 0)
            if mask >> i & 1:
                continue
            fl = _kernels.hamming_chain_fail_len(
                data_parts, oid, qparts, m, i, l, kind, n_int, thresholds
            )
            stats.box_checks += l if fl == 0 else fl
            if fl == 0:
                cand.add(oid)
            else:
                for k in range(fl):
                    mask |= 1 << ((i + k) % m)
                skip[oid] = mask
        stats.candidates = len(cand)
        t2 = time.perf_counter()

        results = []
        for oid in cand:
            stats.verifications += 1
            if _kernels.hamming_distance(data_parts, oid, qparts, m) <= tau:
                results.append(oid)
        results.sort()
        stats.results = len(results)
        t3 = time.perf_counter()
        stats.time_probe = t1 - t0
        stats.time_chain = t2 - t1
        stats.time_verify = t3 - t2
        return results, stats
