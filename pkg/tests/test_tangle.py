import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from clovermu.braid import PureBraid, pure_generator, trivial
from clovermu.invariants import enumerate_sequences, mu, mu_table
from clovermu.tangle import (
    KindError,
    SizeMismatchError,
    SLMoveData,
    TangleFormatError,
    TangleRep,
    bottom_tangle,
    close,
    dumps,
    loads,
    product,
    sl_move,
    string_link,
    to_bottom_tangle,
    to_string_link,
    trivial_tangle,
)

from .strategies import pure_braids


def hopf(n=2, i=1, j=2):
    return string_link(pure_generator(i, j, n))


class TestConversion:
    @given(pure_braids(), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
    def test_round_trip(self, b, fr):
        s = string_link(b, fr[: b.strands])
        assert to_string_link(to_bottom_tangle(s)) == s

    def test_trivial(self):
        assert to_bottom_tangle(trivial_tangle(3, "string_link")) == trivial_tangle(3)

    @given(pure_braids())
    def test_mu_unchanged(self, b):
        s = string_link(b)
        seqs = enumerate_sequences(b.strands, 3)
        assert mu_table(s, seqs) == mu_table(to_bottom_tangle(s), seqs)

    def test_wrong_kind(self):
        with pytest.raises(KindError):
            to_string_link(trivial_tangle(2, "string_link"))


class TestProduct:
    def test_identity(self):
        s = hopf(3, 1, 3)
        assert product(trivial_tangle(3, "string_link"), s) == s

    def test_linking_adds(self):
        assert mu(product(hopf(), hopf()), "12") == 2

    @given(st.integers(2, 4).flatmap(lambda n: st.tuples(*[pure_braids(n=n)] * 3)))
    def test_associative(self, bs):
        a, b, c = (string_link(x) for x in bs)
        assert product(product(a, b), c) == product(a, product(b, c))

    def test_framings_add(self):
        a = string_link(trivial(2), [1, 2])
        b = string_link(trivial(2), [3, -1])
        assert product(a, b).framings == (4, 1)

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatchError):
            product(hopf(2), hopf(3))


class TestClose:
    def test_kind(self):
        assert close(trivial_tangle(3)).kind == "link_closure"

    def test_only_bottom_tangles(self):
        with pytest.raises(KindError):
            close(trivial_tangle(3, "string_link"))


class TestSLMove:
    def test_identity_move(self):
        g = bottom_tangle(pure_generator(1, 2, 3))
        assert sl_move(g, SLMoveData(trivial_tangle(3, "string_link"))) == g

    def test_trivial_pattern_only_twists(self):
        g = bottom_tangle(pure_generator(1, 2, 3))
        moved = sl_move(g, SLMoveData(trivial_tangle(3, "string_link"), (1, 0, -2)))
        assert moved.framings == (1, 0, -2)
        assert not moved.layers

    def test_hopf_pattern_cancels_linking(self):
        moved = sl_move(trivial_tangle(2), SLMoveData(hopf()))
        assert moved.layers
        assert mu(moved, "12") == 0

    @given(st.integers(2, 4).flatmap(lambda n: st.tuples(pure_braids(n=n), pure_braids(n=n), st.lists(
        st.integers(-2, 2), min_size=n, max_size=n))))
    def test_lengths_up_to_three_agree(self, args):
        b, u, tw = args
        g = bottom_tangle(b)
        moved = sl_move(g, SLMoveData(string_link(u), tuple(tw)))
        seqs = enumerate_sequences(b.strands, 3)
        assert mu_table(g, seqs) == mu_table(moved, seqs)

    @given(st.integers(2, 3).flatmap(lambda n: st.tuples(*[pure_braids(n=n, max_gens=3)] * 3)))
    def test_moves_compose(self, args):
        b, u1, u2 = args
        g = bottom_tangle(b)
        n = b.strands
        twice = sl_move(sl_move(g, SLMoveData(string_link(u1))), SLMoveData(string_link(u2)))
        once = sl_move(g, SLMoveData(string_link(PureBraid(n, u2.letters + u1.letters))))
        seqs = enumerate_sequences(n, 4)
        assert mu_table(twice, seqs) == mu_table(once, seqs)

    def test_size_mismatch(self):
        with pytest.raises(SizeMismatchError):
            sl_move(trivial_tangle(3), SLMoveData(hopf(2)))

    def test_pattern_must_be_string_link(self):
        with pytest.raises(KindError):
            SLMoveData(trivial_tangle(2))


class TestJson:
    @given(pure_braids(), st.booleans())
    def test_round_trip(self, b, layered):
        t = bottom_tangle(b, [1] * b.strands)
        if layered:
            t = sl_move(t, SLMoveData(string_link(pure_generator(1, 2, b.strands)), (1,) * b.strands))
        assert loads(dumps(t)) == t

    def test_schema(self):
        doc = json.loads(dumps(bottom_tangle(pure_generator(1, 2, 2))))
        assert doc == {"kind": "bottom_tangle", "components": 2, "braid": "s1 s1", "framings": [0, 0]}

    def test_bad_json_has_position(self):
        with pytest.raises(TangleFormatError) as err:
            loads('{"kind": "string_link",\n "components": }')
        assert err.value.line == 2

    def test_missing_field(self):
        with pytest.raises(TangleFormatError):
            loads('{"kind": "string_link", "components": 2}')

    def test_bad_kind(self):
        with pytest.raises(TangleFormatError):
            loads('{"kind": "knot", "components": 2, "braid": ""}')

    def test_strand_mismatch(self):
        with pytest.raises(SizeMismatchError):
            TangleRep("string_link", 3, pure_generator(1, 2, 2))
