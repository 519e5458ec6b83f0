"""Filtering-power analysis for the fixed-quota ring.

Boxes are m iid draws from an integer-valued distribution.  An object
is an l-candidate when some start opens a prefix-viable chain of length
l, i.e. every prefix sum s' of the first j boxes satisfies m*s' <= j*tau.
The recurrences below compute the exact candidate probability by
splitting the ring at maximal viable "words":

  Pr(w^1)      = P(m*v > tau)
  Pr(w^i)      = sum_s f(i-1, s) * P(m*(s+v) > i*tau)
  M(0)  = 1,   M(x) = sum_{i=1}^{min(x,l)} M(x-i) * Pr(w^i)
  N(1) = M(1), N(x) = M(x) + sum_{i=2}^{min(x,l)} M(x-i)*(i-1)*Pr(w^i)
  Pr(CAND_l)   = 1 - N(m)

where f(j, s) is the probability that j boxes stay prefix-viable with
partial sum exactly s.  All arithmetic is exact (Fractions); floats
only appear at the caller's request.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass(frozen=True)
class DiscretePdf:
    """Distribution over the integers 0..len(probs)-1 with exact masses."""

    probs: tuple

    def __post_init__(self):
        if not self.probs:
            raise ValueError("empty distribution")
        total = sum(self.probs, Fraction(0))
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, expected 1")
        if any(p < 0 for p in self.probs):
            raise ValueError("negative probability")

    @classmethod
    def uniform(cls, lo: int, hi: int) -> "DiscretePdf":
        if not 0 <= lo <= hi:
            raise ValueError("need 0 <= lo <= hi")
        w = Fraction(1, hi - lo + 1)
        return cls(tuple(w if lo <= v <= hi else Fraction(0) for v in range(hi + 1)))

    @classmethod
    def point_mass(cls, v: int) -> "DiscretePdf":
        if v < 0:
            raise ValueError("value must be nonnegative")
        return cls(tuple(Fraction(1) if i == v else Fraction(0) for i in range(v + 1)))

    @classmethod
    def from_weights(cls, weights) -> "DiscretePdf":
        total = sum(weights)
        if total <= 0:
            raise ValueError("weights must have positive sum")
        return cls(tuple(Fraction(w, total) for w in weights))

    @property
    def vmax(self) -> int:
        return len(self.probs) - 1

    def tail_m_gt(self, m: int, bound: int) -> Fraction:
        """P(m*v > bound) for integer comparisons without division."""
        return sum((p for v, p in enumerate(self.probs) if m * v > bound), Fraction(0))


def prefix_viable_mass(pdf: DiscretePdf, m: int, tau: int, j: int) -> dict:
    """f(j, .): partial-sum mass after j prefix-viable boxes.

    A prefix of length j' is viable when m * sum <= j' * tau.
    """
    f = {0: Fraction(1)}
    for step in range(1, j + 1):
        nxt = {}
        for s, p in f.items():
            for v, pv in enumerate(pdf.probs):
                if pv == 0:
                    continue
                s2 = s + v
                if m * s2 <= step * tau:
                    nxt[s2] = nxt.get(s2, Fraction(0)) + p * pv
        f = nxt
    return f


def word_prob(pdf: DiscretePdf, m: int, tau: int, i: int) -> Fraction:
    """Pr(w^i): i-1 prefix-viable boxes followed by one that breaks the
    length-i prefix."""
    if i < 1:
        raise ValueError("word length must be positive")
    total = Fraction(0)
    for s, p in prefix_viable_mass(pdf, m, tau, i - 1).items():
        total += p * pdf.tail_m_gt(m, i * tau - m * s)
    return total


def no_candidate_prob(pdf: DiscretePdf, m: int, tau: int, l: int) -> Fraction:
    """N(m): probability that no start opens a prefix-viable chain of
    length min(l, remaining)."""
    if not 1 <= l <= m:
        raise ValueError(f"chain length {l} outside [1..{m}]")
    w = [Fraction(0)] * (l + 1)
    for i in range(1, l + 1):
        w[i] = word_prob(pdf, m, tau, i)
    M = [Fraction(0)] * (m + 1)
    M[0] = Fraction(1)
    for x in range(1, m + 1):
        M[x] = sum((M[x - i] * w[i] for i in range(1, min(x, l) + 1)), Fraction(0))
    N = M[m] + sum(
        (M[m - i] * (i - 1) * w[i] for i in range(2, min(m, l) + 1)), Fraction(0)
    )
    return N if m > 1 else M[1]


def candidate_prob(pdf: DiscretePdf, m: int, tau: int, l: int) -> Fraction:
    """Pr(CAND_l) = 1 - N(m)."""
    return 1 - no_candidate_prob(pdf, m, tau, l)


def result_prob(pdf: DiscretePdf, m: int, tau: int) -> Fraction:
    """Pr(RES) = P(sum of m iid boxes <= tau), by convolution."""
    conv = [Fraction(1)]
    for _ in range(m):
        nxt = [Fraction(0)] * (len(conv) + pdf.vmax)
        for s, p in enumerate(conv):
            if p == 0:
                continue
            for v, pv in enumerate(pdf.probs):
                if pv:
                    nxt[s + v] += p * pv
        conv = nxt
    return sum(conv[: tau + 1], Fraction(0))


def ratio_curve(pdf: DiscretePdf, m: int, tau: int):
    """Pr(CAND_l)/Pr(RES) for l = 1..m: the candidate overhead of each
    chain length, nonincreasing in l and exactly 1 at l = m."""
    res = result_prob(pdf, m, tau)
    if res == 0:
        raise ValueError("Pr(RES) is zero for these parameters")
    return [candidate_prob(pdf, m, tau, l) / res for l in range(1, m + 1)]


def monte_carlo(pdf: DiscretePdf, m: int, tau: int, l: int, n_samples: int, seed=0):
    """Sampled Pr(CAND_l) and Pr(RES) with standard errors.

    Returns a dict with cand, cand_stderr, res, res_stderr.
    """
    if not 1 <= l <= m:
        raise ValueError(f"chain length {l} outside [1..{m}]")
    rng = np.random.default_rng(seed)
    p = np.array([float(x) for x in pdf.probs])
    p /= p.sum()
    draws = rng.choice(len(p), size=(n_samples, m), p=p)
    res_hits = draws.sum(axis=1) <= tau

    ext = np.concatenate([draws, draws[:, : l - 1]], axis=1) if l > 1 else draws
    c = np.concatenate(
        [np.zeros((n_samples, 1), dtype=np.int64), np.cumsum(ext, axis=1)], axis=1
    )
    viable = np.ones((n_samples, m), dtype=bool)
    for j in range(1, l + 1):
        # prefix sum of length j from each start, via the doubled array
        s = c[:, j : j + m] - c[:, :m]
        viable &= m * s <= j * tau
    cand_hits = viable.any(axis=1)

    def _est(hits):
        phat = hits.mean()
        return phat, float(np.sqrt(phat * (1 - phat) / n_samples))

    cand, cand_se = _est(cand_hits)
    res, res_se = _est(res_hits)
    return {"cand": cand, "cand_stderr": cand_se, "res": res, "res_stderr": res_se}
