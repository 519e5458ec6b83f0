"""Thresholded similarity search built on chains of boxes over a ring.

The sum of m box values bounds (or equals) a selection function; a
candidate must own a chain of l consecutive boxes whose every prefix
stays within its quota.  Longer chains prune strictly more than the
classic single-box (pigeonhole) filter while staying exact.

Subpackages cover the generic ring predicates (:mod:`pigeonring.ring`),
a filter-design harness (:mod:`pigeonring.framework`), three concrete
search problems (:mod:`pigeonring.hamming`, :mod:`pigeonring.setsim`,
:mod:`pigeonring.strsim`), the candidate-probability calculator
(:mod:`pigeonring.analysis`) and a CLI (``pigeonring``).
"""

from ._kernels import IMPL as kernel_impl
from .ring import (
    AT_LEAST,
    AT_MOST,
    FIXED,
    INTRED,
    VARIABLE,
    BoxSequence,
    Chain,
    ThresholdSpec,
    chain_quota,
    chain_sum,
    find_prefix_viable_starts,
    is_prefix_viable,
    is_suffix_viable,
    is_viable,
    pigeonhole_candidate,
    verify_theorems_exhaustive,
)

__all__ = [
    "AT_LEAST",
    "AT_MOST",
    "FIXED",
    "INTRED",
    "VARIABLE",
    "BoxSequence",
    "Chain",
    "ThresholdSpec",
    "chain_quota",
    "chain_sum",
    "find_prefix_viable_starts",
    "is_prefix_viable",
    "is_suffix_viable",
    "is_viable",
    "pigeonhole_candidate",
    "verify_theorems_exhaustive",
    "kernel_impl",
]

__version__ = "0.1.0"
