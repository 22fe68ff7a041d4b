import itertools
import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clovermu.braid import PureBraid, pure_generator, realize_longitude, trivial
from clovermu.freegroup import left_normed_commutator, parse_word
from clovermu.invariants import (
    ResidueValue,
    SequenceIndex,
    certify,
    clear_cache,
    delta,
    enumerate_sequences,
    expansions,
    find_sharp_pair,
    longitudes,
    mu,
    mu_bar,
    mu_table,
    random_commutator_braid,
    random_pure_braid,
    vanishing_depth,
)
from clovermu.magnus import TruncationError, expand, format_series
from clovermu.tangle import (
    KindError,
    SLMoveData,
    bottom_tangle,
    close,
    product,
    sl_move,
    string_link,
    trivial_tangle,
)

from .strategies import pure_braids


def borromean(kind="bottom_tangle"):
    b = realize_longitude(3, left_normed_commutator([1, 2], 3), 3)
    return bottom_tangle(b) if kind == "bottom_tangle" else string_link(b)


def hopf_closure(n=2):
    return close(bottom_tangle(pure_generator(1, 2, n)))


class TestLongitudes:
    def test_trivial(self):
        assert all(w.is_identity() for w in longitudes(trivial_tangle(3)))

    def test_hopf(self):
        lam = longitudes(string_link(pure_generator(1, 2, 2)))
        assert expand(lam[0], 1).coefficient((2,)) == 1
        assert lam[1] == parse_word("x1", 2)

    def test_borromean(self):
        lam = longitudes(borromean(), q=3, mode="series")
        assert format_series(lam[2]) == "1 + X1X2 - X2X1"

    def test_layered_needs_series(self):
        g = sl_move(trivial_tangle(2), SLMoveData(string_link(pure_generator(1, 2, 2))))
        with pytest.raises(KindError):
            longitudes(g, mode="word")
        assert len(longitudes(g, q=3)) == 2

    def test_word_cap_falls_back(self, monkeypatch):
        monkeypatch.setenv("MILNOR_WORD_CAP", "4")
        t = borromean()
        lam = longitudes(t, q=3)
        assert format_series(lam[2]) == "1 + X1X2 - X2X1"

    @given(pure_braids(), st.integers(1, 4))
    def test_word_and_series_agree(self, b, q):
        t = string_link(b)
        words = longitudes(t, mode="word")
        series = longitudes(t, q, mode="series")
        assert [expand(w, q - 1) for w in words] == list(series)


class TestMu:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_calibration(self, n):
        for i, j in itertools.combinations(range(1, n + 1), 2):
            t = string_link(pure_generator(i, j, n))
            assert mu(t, (i, j)) == 1
            assert mu(t, (j, i)) == 1

    def test_single_index(self):
        assert mu(borromean(), "2") == 0

    def test_borromean(self):
        t = borromean()
        assert mu(t, "123") == 1
        assert mu(t, "213") == -1
        assert all(mu(t, I) == 0 for I in enumerate_sequences(3, 2))

    def test_truncation(self):
        with pytest.raises(TruncationError):
            mu(borromean(), "123", q=2)

    def test_closure_needs_flag(self):
        c = close(borromean())
        with pytest.raises(KindError):
            mu(c, "123")
        assert mu(c, "123", representative=True) == 1

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            mu(borromean(), "124")

    @given(pure_braids(), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
    def test_framing_independence(self, b, fr):
        seqs = enumerate_sequences(b.strands, 3)
        plain = mu_table(bottom_tangle(b), seqs)
        assert mu_table(bottom_tangle(b, fr[: b.strands]), seqs) == plain
        moved = sl_move(bottom_tangle(b), SLMoveData(trivial_tangle(b.strands, "string_link"),
                                                     tuple(fr[: b.strands])))
        assert mu_table(moved, seqs) == plain

    def test_overflow_falls_back_to_exact(self):
        b = PureBraid(2, (1, 1) * 40)
        t = string_link(b)
        clear_cache()
        table = expansions(t, 12)
        assert table.coefficient(2, (1,)) == 40

    def test_truncation_independent(self):
        t = borromean()
        clear_cache()
        low = mu(t, "123", q=3)
        assert low == mu(t, "123", q=6)


class TestRealizeSelfCheck:
    # the realized longitude matches the commutator and the rest stays quiet below its weight
    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_commutators_on_distinct_indices(self, k):
        n = 5
        for j in range(1, n + 1):
            others = [m for m in range(1, n + 1) if m != j]
            for idx in itertools.permutations(others, k):
                w = left_normed_commutator(idx, n)
                t = string_link(realize_longitude(j, w, n))
                lam = longitudes(t, q=k + 1, mode="series")
                assert lam[j - 1] == expand(w, k)
                for i in range(1, n + 1):
                    if i != j:
                        assert all(len(m) == 0 or len(m) >= k for m in lam[i - 1].terms)


class TestDelta:
    def test_borromean(self):
        c = close(borromean())
        assert delta(c, "123") == 0
        assert mu_bar(c, "123") == ResidueValue(0, 1)

    def test_hopf_length_two(self):
        assert delta(close(bottom_tangle(pure_generator(1, 2, 3))), "12") == 0

    def test_product_gcd(self):
        s = product(string_link(pure_generator(1, 2, 3)), string_link(pure_generator(1, 3, 3)))
        c = close(bottom_tangle(s.braid))
        length_two = [mu(c, I, representative=True) for I in enumerate_sequences(3, 2) if len(I) == 2]
        assert delta(c, "123") == math.gcd(*length_two)

    def test_unlink(self):
        c = close(trivial_tangle(3))
        for I in enumerate_sequences(3, 3):
            assert mu_bar(c, I) == ResidueValue(0, 0)

    def test_single_index(self):
        assert mu_bar(close(borromean()), "3") == ResidueValue(0, 0)

    def test_needs_closure(self):
        with pytest.raises(KindError):
            delta(borromean(), "123")

    def test_residue_canonical(self):
        assert ResidueValue(3, -1).value == 2
        assert ResidueValue(0, -7).value == -7
        with pytest.raises(ValueError):
            ResidueValue(-1, 0)

    @given(pure_braids(), pure_braids())
    def test_mu_bar_invariant_under_sl_move(self, b, u):
        if u.strands != b.strands:
            return
        g = bottom_tangle(b)
        moved = sl_move(g, SLMoveData(string_link(u), (1,) * b.strands))
        for I in enumerate_sequences(b.strands, 4):
            assert mu_bar(close(g), I) == mu_bar(close(moved), I)


class TestEnumerate:
    def test_counts(self):
        assert len(enumerate_sequences(3, 3, True)) == 15
        assert len(enumerate_sequences(2, 2, False)) == 6
        assert [str(I) for I in enumerate_sequences(1, 1)] == ["1"]

    def test_order(self):
        out = [str(I) for I in enumerate_sequences(2, 2)]
        assert out == ["1", "2", "11", "12", "21", "22"]

    def test_big_indices(self):
        assert str(SequenceIndex((1, 10))) == "1,10"
        assert SequenceIndex.parse("1,10") == SequenceIndex((1, 10))
        assert SequenceIndex.parse("213").entries == (2, 1, 3)

    def test_non_repeated_flag(self):
        assert SequenceIndex((1, 2)).non_repeated
        assert not SequenceIndex((1, 1)).non_repeated

    def test_bad(self):
        with pytest.raises(ValueError):
            enumerate_sequences(2, 0)
        with pytest.raises(ValueError):
            SequenceIndex(())


class TestVanishingDepth:
    def test_examples(self):
        assert vanishing_depth(close(trivial_tangle(3)), 4) == (4, True)
        assert vanishing_depth(hopf_closure(), 4) == (1, False)
        assert vanishing_depth(close(borromean()), 4) == (2, False)

    def test_needs_room(self):
        with pytest.raises(TruncationError):
            vanishing_depth(close(borromean()), 4, q=4)

    @given(pure_braids(max_gens=4))
    def test_matches_brute_force(self, b):
        c = close(bottom_tangle(b))
        bound = 4
        k = 0
        for m in range(1, bound + 1):
            if all(mu_bar(c, I).is_zero for I in enumerate_sequences(b.strands, m) if len(I) == m):
                k = m
            else:
                break
        d = vanishing_depth(c, bound)
        assert d.k == k
        assert d.saturated == (k == bound)

    def test_certify(self):
        assert certify(borromean(), 4).certified_length == 5
        assert certify(hopf_closure(), 4).certified_length == 3


class TestStacking:
    @given(st.integers(0, 10**6), st.integers(1, 3))
    def test_first_nonvanishing_additivity(self, seed, weight):
        rng = random.Random(seed)
        n = rng.randint(2, 4)
        a = string_link(random_commutator_braid(n, weight, rng, factors=rng.randint(1, 2)))
        b = string_link(random_commutator_braid(n, weight, rng, factors=rng.randint(1, 2)))
        m = weight + 1
        assert all(mu(x, I) == 0 for x in (a, b) for I in enumerate_sequences(n, m - 1))
        ab = product(a, b)
        for I in enumerate_sequences(n, m):
            if len(I) == m:
                assert mu(ab, I) == mu(a, I) + mu(b, I)


class TestDepthTwoMoves:
    @pytest.mark.parametrize("seed", range(6))
    def test_depth_two_agreement(self, seed):
        rng = random.Random(seed)
        n = 4
        base = bottom_tangle(random_commutator_braid(n, 2, rng))
        u = string_link(random_commutator_braid(n, 3, rng))
        moved = sl_move(base, SLMoveData(u, (1, -1, 0, 2)))
        seqs = enumerate_sequences(n, 5)
        assert mu_table(base, seqs) == mu_table(moved, seqs)


def test_sharp_pair_search():
    pair = find_sharp_pair(seed=0, tries=2000)
    assert pair is not None
    moved = sl_move(pair.base, pair.move)
    assert mu(pair.base, pair.sequence) == pair.before
    assert mu(moved, pair.sequence) == pair.after
    assert pair.before != pair.after
    assert mu_table(pair.base, enumerate_sequences(4, 3)) == mu_table(moved, enumerate_sequences(4, 3))


def test_random_pure_braid_respects_length():
    rng = random.Random(0)
    for _ in range(50):
        assert len(random_pure_braid(4, 12, rng)) <= 12
    assert trivial(2) == random_pure_braid(2, 1, rng)
