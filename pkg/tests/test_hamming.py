import numpy as np
import pytest

from pigeonring.hamming import (
    HammingIndex,
    allocate_thresholds,
    ball,
    ball_size,
    default_part_count,
    effective_part_count,
    pack_bits,
    partition_dims,
)
from pigeonring.ring import FIXED, INTRED, ThresholdSpec

from oracles import hamming as oracle_hamming

VECTORS = [
    "1111101110",  # x1
    "0001011110",  # x2
    "0101100110",  # x3
    "1101101100",  # x4
]
QUERY = "0010010011"


def bits(s):
    return np.array([int(c) for c in s], dtype=np.uint8)


def matrix(strings):
    return np.array([[int(c) for c in s] for s in strings], dtype=np.uint8)


def brute(data, q, tau):
    return [i for i, row in enumerate(data) if oracle_hamming(row, q) <= tau]


class TestPartition:
    def test_uneven(self):
        assert partition_dims(7, 3).widths == (3, 2, 2)

    def test_even(self):
        assert partition_dims(10, 5).widths == (2, 2, 2, 2, 2)

    def test_single_part(self):
        assert partition_dims(6, 1).widths == (6,)

    def test_covers_all_dims(self):
        for d in range(1, 40):
            for m in range(1, d + 1):
                layout = partition_dims(d, m)
                assert sum(layout.widths) == d
                assert max(layout.widths) - min(layout.widths) <= 1

    def test_bad_m(self):
        with pytest.raises(ValueError):
            partition_dims(4, 5)
        with pytest.raises(ValueError):
            partition_dims(4, 0)


class TestDefaults:
    def test_default_part_count(self):
        assert default_part_count(64) == 4
        assert default_part_count(128) == 8
        assert default_part_count(10) == 1

    def test_effective_part_count(self):
        assert effective_part_count(8, 5) == 5
        assert effective_part_count(3, 5) == 4
        assert effective_part_count(0, 5) == 1


class TestAllocate:
    def test_even_split(self):
        assert allocate_thresholds(8, 5).thresholds == (1, 1, 1, 1, 0)

    def test_minimal(self):
        assert allocate_thresholds(5, 5).thresholds == (1, 0, 0, 0, 0)

    def test_sum_invariant(self):
        for m in range(1, 8):
            for tau in range(m - 1, 20):
                spec = allocate_thresholds(tau, m)
                assert sum(spec.thresholds) == tau - m + 1

    def test_too_small_tau(self):
        with pytest.raises(ValueError):
            allocate_thresholds(3, 5)


class TestPack:
    def test_msb_first(self):
        layout = partition_dims(4, 2)
        packed = pack_bits(bits("1001"), layout)
        assert packed.tolist() == [[2, 1]]

    def test_part0_map(self):
        idx = HammingIndex(matrix(VECTORS))
        _, _, maps = idx.packed(5)
        assert maps[0] == {3: [0, 3], 0: [1], 1: [2]}

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            pack_bits(bits("101"), partition_dims(4, 2))


class TestBall:
    def test_radius_zero(self):
        assert list(ball(5, 4, 0)) == [5]

    def test_radius_one(self):
        got = list(ball(0, 3, 1))
        assert got[0] == 0 and sorted(got) == [0, 1, 2, 4]

    def test_size_matches_enumeration(self):
        for w in range(1, 7):
            for r in range(w + 1):
                vals = list(ball(0, w, r))
                assert len(vals) == len(set(vals)) == ball_size(w, r)
                assert all(v.bit_count() <= r for v in vals)

    def test_size_binomial(self):
        assert ball_size(10, 2) == 1 + 10 + 45
        assert ball_size(3, 5) == 8  # radius capped at width


class TestGoldenQueries:
    @pytest.fixture()
    def idx(self):
        return HammingIndex(matrix(VECTORS))

    def test_fixed_l1(self, idx):
        results, stats = idx.query(bits(QUERY), 5, 1, mode=FIXED, parts=5)
        assert results == [1]
        assert stats.candidates == 3  # x1, x2, x3 survive the pigeonhole stage

    def test_fixed_l2(self, idx):
        results, stats = idx.query(bits(QUERY), 5, 2, mode=FIXED, parts=5)
        assert results == [1]
        assert stats.candidates == 2  # only x2, x3 keep a prefix-viable chain

    def test_intred_l1(self, idx):
        results, stats = idx.query(bits(QUERY), 5, 1, mode=INTRED, parts=5)
        assert results == [1]
        assert stats.candidates == 2  # T=(1,0,0,0,0) already filters x1, x4

    def test_intred_l2(self, idx):
        results, stats = idx.query(bits(QUERY), 5, 2, mode=INTRED, parts=5)
        assert results == [1]
        assert stats.candidates == 1  # x3's only viable box cannot extend

    def test_variable_l1(self, idx):
        spec = ThresholdSpec.variable((1, 1, 1, 1, 1))
        results, stats = idx.query(bits(QUERY), 5, 1, spec=spec)
        assert results == [1]
        assert stats.candidates == 3

    def test_exact_self_query(self, idx):
        for i, s in enumerate(VECTORS):
            results, _ = idx.query(bits(s), 0, 1, mode=FIXED, parts=5)
            assert results == [i]


class TestScanEquivalence:
    @pytest.mark.parametrize("mode", [FIXED, INTRED])
    def test_random(self, mode):
        rng = np.random.default_rng(7)
        for trial in range(25):
            n, d = 40, int(rng.integers(8, 33))
            data = rng.integers(0, 2, size=(n, d), dtype=np.uint8)
            idx = HammingIndex(data)
            q = rng.integers(0, 2, size=d, dtype=np.uint8)
            tau = int(rng.integers(0, d))
            m = int(rng.integers(1, min(d, 6) + 1))
            if mode == INTRED:
                m = effective_part_count(tau, m)
            expected = brute(data, q, tau)
            for l in range(1, m + 1):
                results, _ = idx.query(q, tau, l, mode=mode, parts=m)
                assert results == expected, (trial, mode, l, tau, m)

    def test_variable_random(self):
        rng = np.random.default_rng(11)
        for trial in range(15):
            n, d, m = 30, 20, 5
            data = rng.integers(0, 2, size=(n, d), dtype=np.uint8)
            idx = HammingIndex(data)
            q = rng.integers(0, 2, size=d, dtype=np.uint8)
            tau = int(rng.integers(1, 12))
            t = [0] * m
            for _ in range(tau):
                t[int(rng.integers(0, m))] += 1
            spec = ThresholdSpec.variable(tuple(t))
            expected = brute(data, q, tau)
            for l in range(1, m + 1):
                results, _ = idx.query(q, tau, l, spec=spec)
                assert results == expected, (trial, l, t)


class TestProperties:
    def test_box_sum_equals_distance(self):
        idx = HammingIndex(matrix(VECTORS))
        q = bits(QUERY)
        for oid, s in enumerate(VECTORS):
            total = sum(idx.part_distance(oid, q, 5, i) for i in range(5))
            assert total == oracle_hamming(s, QUERY)

    def test_candidates_monotone_in_l(self):
        rng = np.random.default_rng(3)
        data = rng.integers(0, 2, size=(50, 24), dtype=np.uint8)
        idx = HammingIndex(data)
        q = rng.integers(0, 2, size=24, dtype=np.uint8)
        prev = None
        for l in range(1, 5):
            results, stats = idx.query(q, 8, l, mode=FIXED, parts=4)
            assert results == brute(data, q, 8)
            if prev is not None:
                assert stats.candidates <= prev
            prev = stats.candidates

    def test_negative_tau(self):
        idx = HammingIndex(matrix(VECTORS))
        results, _ = idx.query(bits(QUERY), -1, 1)
        assert results == []
