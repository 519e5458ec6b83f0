"""Compare the compiled kernels against the pure-Python fallbacks.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from pigeonring._kernels import pure

try:
    from pigeonring._kernels import _native as native
except ImportError:
    native = None


def _time(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_hamming(rng, impl):
    n, m = 20000, 4
    parts = rng.integers(0, 2**64, size=(n, m), dtype=np.uint64)
    q = rng.integers(0, 2**64, size=m, dtype=np.uint64)
    t = np.full(m, 3, dtype=np.int64)

    def run():
        for row in range(n):
            impl.hamming_chain_fail_len(parts, row, q, m, 0, m, impl.KIND_INTRED, 15, t)

    return run


def bench_banded(rng, impl):
    alpha = np.frombuffer(b"abcdefgh", dtype=np.uint8)
    pairs = []
    for _ in range(300):
        x = bytes(rng.choice(alpha, size=64).tobytes())
        y = bytearray(x)
        for pos in rng.integers(0, 64, size=3):
            y[pos] = rng.choice(alpha)
        pairs.append((x, bytes(y)))

    def run():
        for x, y in pairs:
            impl.banded_ed_within(x, y, 4)

    return run


def bench_sig(rng, impl):
    n = 200000
    lo = rng.integers(0, 2**64, size=n, dtype=np.uint64)
    hi = rng.integers(0, 2**64, size=n, dtype=np.uint64)
    glo = int(rng.integers(0, 2**64, dtype=np.uint64))
    ghi = int(rng.integers(0, 2**64, dtype=np.uint64))

    def run():
        impl.sig_window_min(lo, hi, 0, n - 1, glo, ghi)

    return run


def main():
    rng = np.random.default_rng(7)
    benches = [
        ("hamming_chain_fail_len", bench_hamming),
        ("banded_ed_within", bench_banded),
        ("sig_window_min", bench_sig),
    ]
    print(f"{'kernel':<24} {'pure (s)':>10} {'native (s)':>11} {'speedup':>8}")
    for name, make in benches:
        t_pure = _time(make(rng, pure))
        if native is None:
            print(f"{name:<24} {t_pure:>10.4f} {'n/a':>11} {'n/a':>8}")
            continue
        t_nat = _time(make(rng, native))
        print(f"{name:<24} {t_pure:>10.4f} {t_nat:>11.4f} {t_pure / t_nat:>7.1f}x")


if __name__ == "__main__":
    main()
