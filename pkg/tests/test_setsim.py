import random
from fractions import Fraction

import pytest

from pigeonring.setsim import (
    ClassMap,
    SetIndex,
    TokenDictionary,
    _chain_fail_len,
    _class_overlaps,
    compute_prefix,
    overlap_threshold,
    query_thresholds,
)

from oracles import jaccard


class TestOverlapThreshold:
    def test_half(self):
        assert overlap_threshold(10, 10, Fraction(1, 2)) == 7

    def test_three_fifths(self):
        assert overlap_threshold(12, 12, Fraction(3, 5)) == 9

    def test_tau_one_forces_equality(self):
        assert overlap_threshold(12, 12, 1) == 12
        assert overlap_threshold(7, 7, 1) == 7

    def test_float_vs_fraction_consistency(self):
        assert overlap_threshold(10, 10, 0.5) == 7

    def test_matches_direct_rational(self):
        for nx in range(1, 15):
            for nq in range(1, 15):
                for tau in (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(4, 5), 1):
                    t = Fraction(tau)
                    expected = -(-((nx + nq) * t) // (1 + t))
                    assert overlap_threshold(nx, nq, tau) == expected

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            overlap_threshold(5, 5, 0)
        with pytest.raises(ValueError):
            overlap_threshold(5, 5, Fraction(3, 2))


# -- the two-record figure: 12 tokens each, alphabetical order, 4 classes ----

LETTERS = "ABCDEFGHIJKLMNOP"
DICT = TokenDictionary(ids={c: i for i, c in enumerate(LETTERS)}, freqs=(1,) * 16)
# classes 1..4 cover A-B, C-D, E-F, G-P
CM = ClassMap(bounds=(1, 3, 5), m=5)
X_IDS = tuple(LETTERS.index(c) for c in "ACDEGHIJKLMN")
Q_IDS = tuple(LETTERS.index(c) for c in "BCDFGHILMNOP")


class TestGoldenPair:
    def test_prefix_lengths(self):
        xv = compute_prefix(X_IDS, 9, CM)
        qv = compute_prefix(Q_IDS, 9, CM)
        assert xv.prefix_len == 9 and qv.prefix_len == 9
        assert xv.class_counts == (1, 2, 1, 5)
        assert qv.class_counts == (1, 2, 1, 5)

    def test_thresholds(self):
        qv = compute_prefix(Q_IDS, 9, CM)
        assert query_thresholds(qv, 5, 9) == (4, 1, 2, 2, 4)

    def test_boxes(self):
        xv = compute_prefix(X_IDS, 9, CM)
        qv = compute_prefix(Q_IDS, 9, CM)
        assert _class_overlaps(xv, qv, CM) == [0, 0, 2, 0, 3]

    def test_candidate_at_l1(self):
        xv = compute_prefix(X_IDS, 9, CM)
        qv = compute_prefix(Q_IDS, 9, CM)
        b = _class_overlaps(xv, qv, CM)
        t = query_thresholds(qv, 5, 9)
        viable = [k for k in range(1, 5) if b[k] >= t[k]]
        assert viable == [2]  # b_2 = 2 is the only viable box

    def test_filtered_at_l2(self):
        xv = compute_prefix(X_IDS, 9, CM)
        qv = compute_prefix(Q_IDS, 9, CM)
        b = _class_overlaps(xv, qv, CM)
        t = query_thresholds(qv, 5, 9)
        # suffix box replaced by its upper bound (probing-rule side)
        b[0] = len(X_IDS) - xv.prefix_len  # x's last prefix token K < q's M
        assert all(_chain_fail_len(b, t, 5, i, 2) != 0 for i in range(5))


class TestComputePrefix:
    def test_all_class_one_full_threshold(self):
        cm = ClassMap(bounds=(15, 15, 15), m=4)  # every token in class 1
        ids = (0, 3, 7, 9)
        view = compute_prefix(ids, 4, cm)
        assert view.prefix_len == 1

    def test_tau_one_brute_force(self):
        rng = random.Random(5)
        for _ in range(50):
            m = rng.randint(2, 5)
            size = rng.randint(1, 12)
            ids = tuple(sorted(rng.sample(range(30), size)))
            bounds = tuple(sorted(rng.sample(range(30), m - 1)))
            cm = ClassMap(bounds=bounds[:-1] + (29,), m=m)
            view = compute_prefix(ids, 1, cm)
            # brute force: smallest p whose class-count score hits |x|-tau+1
            target = size
            best = None
            for p in range(1, size + 1):
                counts = [0] * (m - 1)
                score = 0
                for tid in ids[:p]:
                    k = cm.of(tid)
                    counts[k - 1] += 1
                    if counts[k - 1] >= k:
                        score += 1
                if score == target:
                    best = p
                    break
            if best is None:
                assert view is None
            else:
                assert view is not None and view.prefix_len == best

    def test_threshold_above_size(self):
        view = compute_prefix((1, 2, 3), 5, CM)
        assert view.prefix_len == 0

    def test_nonpositive_threshold(self):
        with pytest.raises(ValueError):
            compute_prefix((1, 2), 0, CM)


class TestQueryThresholds:
    def test_full_prefix_gives_t0_one(self):
        cm = ClassMap(bounds=(29, 29, 29), m=4)
        ids = (5, 6, 7)  # all class 1: every token scores, so p = |q| at tau=1
        view = compute_prefix(ids, 1, cm)
        assert view.prefix_len == len(ids)
        t = query_thresholds(view, 4, 1)
        assert t[0] == 1

    def test_empty_class_gets_one(self):
        qv = compute_prefix(Q_IDS, 9, CM)
        t = query_thresholds(qv, 5, 9)
        assert t[3] == 2  # cnt(q, p, 3) = 1 < 3 -> cnt + 1

    def test_sum_invariant(self):
        rng = random.Random(9)
        for _ in range(60):
            m = rng.randint(2, 6)
            size = rng.randint(1, 15)
            ids = tuple(sorted(rng.sample(range(40), size)))
            bounds = tuple(sorted(rng.sample(range(39), m - 2))) + (39,)
            cm = ClassMap(bounds=bounds, m=m)
            tau = rng.randint(1, size)
            view = compute_prefix(ids, tau, cm)
            if view is None or view.prefix_len == 0:
                continue
            assert sum(query_thresholds(view, m, tau)) == tau + m - 1


def brute_jaccard(records, q, tau_j):
    return [i for i, r in enumerate(records) if jaccard(r, q) >= Fraction(tau_j)]


def brute_overlap(records, q, tau_ov):
    qs = set(q)
    return [i for i, r in enumerate(records) if len(set(r) & qs) >= tau_ov]


def random_records(rng, n, universe, max_len):
    # zipf-ish skew so classes carry uneven mass
    weights = [1.0 / (i + 1) for i in range(universe)]
    out = []
    for _ in range(n):
        size = rng.randint(1, max_len)
        rec = set(rng.choices(range(universe), weights=weights, k=size))
        out.append(sorted(f"t{v}" for v in rec))
    return out


class TestIndexQueries:
    def test_self_query_tau_one(self):
        rng = random.Random(1)
        records = random_records(rng, 40, 25, 8)
        idx = SetIndex(records, m=4, tau_j=1)
        for qi in (0, 7, 19):
            results, _ = idx.query(records[qi], 2)
            expected = [i for i, r in enumerate(records) if set(r) == set(records[qi])]
            assert results == expected

    @pytest.mark.parametrize("tau_j", [Fraction(1, 2), Fraction(2, 3), Fraction(4, 5)])
    def test_scan_equivalence_jaccard(self, tau_j):
        rng = random.Random(int(tau_j * 100))
        for trial in range(8):
            records = random_records(rng, 60, 30, 10)
            m = rng.randint(2, 6)
            idx = SetIndex(records, m=m, tau_j=tau_j)
            for _ in range(5):
                q = random_records(rng, 1, 30, 10)[0]
                expected = brute_jaccard(records, q, tau_j)
                for l in range(1, m + 1):
                    results, _ = idx.query(q, l)
                    assert sorted(results) == expected, (trial, m, l, q)

    def test_scan_equivalence_overlap(self):
        rng = random.Random(42)
        for trial in range(8):
            records = random_records(rng, 60, 25, 10)
            m = rng.randint(2, 6)
            tau_ov = rng.randint(1, 6)
            idx = SetIndex(records, m=m, tau_ov=tau_ov)
            for _ in range(5):
                q = random_records(rng, 1, 25, 10)[0]
                expected = brute_overlap(records, q, tau_ov)
                for l in range(1, m + 1):
                    results, _ = idx.query(q, l)
                    assert sorted(results) == expected, (trial, m, l, tau_ov, q)

    def test_unseen_query_tokens(self):
        records = [["a", "b", "c"], ["a", "b"], ["x", "y", "z"]]
        idx = SetIndex(records, m=3, tau_ov=2)
        results, _ = idx.query(["a", "b", "nope"], 1)
        assert sorted(results) == [0, 1]

    def test_empty_query(self):
        idx = SetIndex([["a", "b"]], m=3, tau_ov=1)
        results, stats = idx.query([], 1)
        assert results == [] and stats.results == 0

    def test_candidates_monotone_in_l(self):
        rng = random.Random(77)
        records = random_records(rng, 120, 30, 12)
        m = 5
        idx = SetIndex(records, m=m, tau_j=Fraction(1, 2))
        for _ in range(6):
            q = random_records(rng, 1, 30, 12)[0]
            prev = None
            for l in range(1, m + 1):
                results, stats = idx.query(q, l)
                assert sorted(results) == brute_jaccard(records, q, Fraction(1, 2))
                if prev is not None:
                    assert stats.candidates <= prev
                prev = stats.candidates

    def test_bad_config(self):
        with pytest.raises(ValueError):
            SetIndex([["a"]], m=3)  # neither threshold
        with pytest.raises(ValueError):
            SetIndex([["a"]], m=3, tau_j=Fraction(1, 2), tau_ov=2)
        idx = SetIndex([["a", "b"]], m=3, tau_ov=1)
        with pytest.raises(ValueError):
            idx.query(["a"], 4)  # l outside [1..m]


class TestBoxSumInvariant:
    def test_class_boxes_bounded_by_overlap(self):
        """Prefix class boxes never exceed the true overlap, and the
        optimistic suffix bound keeps the box sum at or above it."""
        rng = random.Random(13)
        records = random_records(rng, 30, 20, 10)
        idx = SetIndex(records, m=4, tau_ov=2)
        cm = idx.classmap
        for qi in range(0, 30, 3):
            q_ids = tuple(idx.dictionary.encode(records[qi]))
            qv = compute_prefix(q_ids, 2, cm)
            for oid, x_ids in enumerate(idx.views):
                if not x_ids:
                    continue
                xv = compute_prefix(tuple(x_ids), 2, cm)
                if xv is None or qv is None or 0 in (xv.prefix_len, qv.prefix_len):
                    continue
                overlap = len(set(x_ids) & set(q_ids))
                b = _class_overlaps(xv, qv, cm)
                assert sum(b[1:]) <= overlap
                if xv.ids[xv.prefix_len - 1] < qv.ids[qv.prefix_len - 1]:
                    ub = len(xv.ids) - xv.prefix_len
                else:
                    ub = len(qv.ids) - qv.prefix_len
                assert ub + sum(b[1:]) >= overlap
