"""Kernel selection: compiled extension when available, else pure Python.

Set PIGEONRING_PURE=1 to force the fallback (useful for benchmarking
and debugging).
"""

import os

from . import pure

if os.environ.get("PIGEONRING_PURE"):
    impl = pure
else:
    try:
        from . import _native as impl  # type: ignore[no-redef]
    except ImportError:
        impl = pure

IMPL = impl.IMPL
KIND_FIXED = pure.KIND_FIXED
KIND_VARIABLE = pure.KIND_VARIABLE
KIND_INTRED = pure.KIND_INTRED

chain_fail_len = impl.chain_fail_len
hamming_chain_fail_len = impl.hamming_chain_fail_len
hamming_distance = impl.hamming_distance
banded_ed_within = impl.banded_ed_within
sig_window_min = impl.sig_window_min
