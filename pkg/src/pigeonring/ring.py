"""Chain arithmetic over a ring of boxes and the viability predicates.

A ring holds m box values; a chain is a run of consecutive boxes with
cyclic indexing.  Candidates are objects that still own a chain whose
every prefix stays within its quota.  Quotas come in three modes:

* fixed  -- each length-l prefix gets l*n/m (compared exactly by
  cross-multiplication, never by floating-point division);
* variable -- per-box thresholds t_i with the quota being their sum
  along the chain;
* intred -- integer thresholds with the slack term (l-1) for the
  at-most direction and (1-l) for at-least.
"""

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._kernels import pure as _pure

AT_MOST = "at-most"
AT_LEAST = "at-least"

FIXED = "fixed"
VARIABLE = "variable"
INTRED = "intred"

_KIND_CODE = {FIXED: _pure.KIND_FIXED, VARIABLE: _pure.KIND_VARIABLE, INTRED: _pure.KIND_INTRED}


@dataclass(frozen=True)
class BoxSequence:
    """The m box values of one (object, query) pair; indexing wraps mod m."""

    values: tuple

    @property
    def m(self):
        return len(self.values)

    def __post_init__(self):
        if not self.values:
            raise ValueError("a ring needs at least one box")

    def __getitem__(self, i):
        return self.values[i % len(self.values)]

    def total(self):
        return sum(self.values)

    @staticmethod
    def of(values: Iterable) -> "BoxSequence":
        return BoxSequence(tuple(values))


@dataclass(frozen=True)
class Chain:
    """l consecutive boxes starting at ``start`` on the ring."""

    start: int
    length: int


@dataclass(frozen=True)
class ThresholdSpec:
    """How chain quotas are computed, and the comparison direction."""

    mode: str
    direction: str = AT_MOST
    n: float | int | None = None
    thresholds: tuple | None = None

    def __post_init__(self):
        if self.mode not in (FIXED, VARIABLE, INTRED):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.direction not in (AT_MOST, AT_LEAST):
            raise ValueError(f"unknown direction {self.direction!r}")
        if self.mode == FIXED:
            if self.n is None:
                raise ValueError("fixed quota needs n")
        elif self.thresholds is None:
            raise ValueError(f"{self.mode} mode needs thresholds")

    @property
    def at_most(self):
        return self.direction == AT_MOST

    @staticmethod
    def fixed(n, direction=AT_MOST) -> "ThresholdSpec":
        return ThresholdSpec(FIXED, direction, n=n)

    @staticmethod
    def variable(thresholds: Sequence, direction=AT_MOST) -> "ThresholdSpec":
        return ThresholdSpec(VARIABLE, direction, thresholds=tuple(thresholds))

    @staticmethod
    def integer_reduction(thresholds: Sequence[int], direction=AT_MOST) -> "ThresholdSpec":
        return ThresholdSpec(INTRED, direction, thresholds=tuple(thresholds))


def _check_chain(c: Chain, m: int):
    if not 1 <= c.length <= m:
        raise ValueError(f"chain length {c.length} outside [1..{m}]")
    if not 0 <= c.start < m:
        raise ValueError(f"chain start {c.start} outside [0..{m - 1}]")


def chain_sum(b: BoxSequence, c: Chain):
    """Sum of the chain's boxes, wrapping cyclically."""
    _check_chain(c, b.m)
    return sum(b[c.start + j] for j in range(c.length))


def chain_quota(spec: ThresholdSpec, c: Chain, m: int):
    """The quota the chain's sum is compared against."""
    _check_chain(c, m)
    l = c.length
    if spec.mode == FIXED:
        q = l * spec.n / m
        return q
    t = spec.thresholds
    if len(t) != m:
        raise ValueError("threshold sequence length must equal m")
    tsum = sum(t[(c.start + j) % m] for j in range(l))
    if spec.mode == VARIABLE:
        return tsum
    if spec.at_most:
        return l - 1 + tsum
    return 1 - l + tsum


def is_viable(b: BoxSequence, spec: ThresholdSpec, c: Chain) -> bool:
    """Non-strict comparison of chain sum against quota; ties are viable."""
    s = chain_sum(b, c)
    m = b.m
    if spec.mode == FIXED:
        # cross-multiplied: exact whenever boxes and n are integers
        lhs, rhs = m * s, c.length * spec.n
    else:
        lhs, rhs = s, chain_quota(spec, c, m)
    return lhs <= rhs if spec.at_most else lhs >= rhs


def prefix_fail_length(b: BoxSequence, spec: ThresholdSpec, start: int, l: int) -> int:
    """0 when every prefix of the chain at ``start`` is viable, else the
    smallest failing prefix length (callers use it for the skip rule)."""
    m = b.m
    _check_chain(Chain(start, l), m)
    kind = _KIND_CODE[spec.mode]
    return _pure.chain_fail_len(
        b.values, m, start, l, kind, spec.n, spec.thresholds, spec.at_most
    )


def is_prefix_viable(b: BoxSequence, spec: ThresholdSpec, start: int, l: int) -> bool:
    return prefix_fail_length(b, spec, start, l) == 0


def suffix_fail_length(b: BoxSequence, spec: ThresholdSpec, start: int, l: int) -> int:
    """Suffix-viability: every suffix of the chain viable.  Computed as
    prefix-viability on the reversed ring."""
    m = b.m
    _check_chain(Chain(start, l), m)
    rev = BoxSequence(tuple(reversed(b.values)))
    if spec.mode == FIXED:
        rspec = spec
    else:
        rspec = ThresholdSpec(
            spec.mode, spec.direction, thresholds=tuple(reversed(spec.thresholds))
        )
    rstart = (m - 1 - (start + l - 1)) % m
    return prefix_fail_length(rev, rspec, rstart, l)


def is_suffix_viable(b: BoxSequence, spec: ThresholdSpec, start: int, l: int) -> bool:
    return suffix_fail_length(b, spec, start, l) == 0


def find_prefix_viable_starts(b: BoxSequence, spec: ThresholdSpec, l: int) -> set:
    """All start indices whose length-l chain is prefix-viable.

    A failure at prefix length l' rules out the l'-1 following start
    positions as well, so they are skipped; the returned set is the
    same as checking every position.
    """
    m = b.m
    if not 1 <= l <= m:
        raise ValueError(f"chain length {l} outside [1..{m}]")
    starts = set()
    skip = 0  # bitmask of positions known to fail
    for i in range(m):
        if skip >> i & 1:
            continue
        r = prefix_fail_length(b, spec, i, l)
        if r == 0:
            starts.add(i)
        else:
            for k in range(1, r):
                skip |= 1 << ((i + k) % m)
    return starts


def pigeonhole_candidate(b: BoxSequence, spec: ThresholdSpec) -> bool:
    """The l=1 degeneration: at least one single viable box."""
    return bool(find_prefix_viable_starts(b, spec, 1))


@dataclass
class TheoremReport:
    m: int
    n: int
    omega: int
    sequences: int
    within_bound: int
    violations: int


def verify_theorems_exhaustive(m: int, n: int, omega: int) -> TheoremReport:
    """Exhaustive check of the chain-existence guarantees at small scale.

    Enumerates every integer box ring in [0..omega]^m.  For rings with
    sum <= n there must exist, for every l, a prefix-viable and a
    suffix-viable chain; for rings with sum > n a prefix-non-viable
    and a suffix-non-viable chain of every length.
    """
    if omega ** m > 10 ** 7:
        raise ValueError("scale guard exceeded: omega**m must be <= 1e7")
    grids = np.indices((omega + 1,) * m).reshape(m, -1).T  # (K, m)
    k = grids.shape[0]
    sums = grids.sum(axis=1)
    within = sums <= n

    def exists_all_lengths(arr, negate):
        """For each row: whether, for every l, some start has all prefix
        comparisons on the given side.  Returns (K, m) existence flags,
        column l-1 for length l."""
        ext = np.concatenate([arr, arr[:, : m - 1]], axis=1)
        csum = np.cumsum(ext, axis=1)
        run = np.ones((arr.shape[0], m), dtype=bool)
        out = np.empty((arr.shape[0], m), dtype=bool)
        for l in range(1, m + 1):
            # chain sums of length l for every start
            if l == 1:
                cs = arr
            else:
                cs = csum[:, l - 1 : l - 1 + m].copy()
                cs[:, 1:] -= csum[:, : m - 1]
            ok = (m * cs > l * n) if negate else (m * cs <= l * n)
            run &= ok
            out[:, l - 1] = run.any(axis=1)
        return out

    pv = exists_all_lengths(grids, negate=False)
    pnv = exists_all_lengths(grids, negate=True)
    rev = grids[:, ::-1]
    sv = exists_all_lengths(rev, negate=False)
    snv = exists_all_lengths(rev, negate=True)

    ok_within = (pv & sv).all(axis=1)
    ok_beyond = (pnv & snv).all(axis=1)
    violations = int(np.count_nonzero(within & ~ok_within)) + int(
        np.count_nonzero(~within & ~ok_beyond)
    )
    return TheoremReport(
        m=m,
        n=n,
        omega=omega,
        sequences=k,
        within_bound=int(np.count_nonzero(within)),
        violations=violations,
    )
