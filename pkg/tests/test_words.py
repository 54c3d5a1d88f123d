import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flatflow.errors import MalformedExponent, UnknownGenerator
from flatflow.quaternions import ad
from flatflow.reps import evaluate_word
from flatflow.words import (
    GroupPresentation,
    Word,
    abelianized_boundary,
    fox_derivative,
    parse_word,
)

ABC = GroupPresentation.parse(["V", "W", "X", "Y", "Z", "A", "B", "C", "D"], [])


class TestParse:
    def test_four_letters(self, sigma235):
        w = parse_word("H Q1 Q2 Q3", sigma235)
        assert len(w) == 4
        assert w.letters == (("H", 1), ("Q1", 1), ("Q2", 1), ("Q3", 1))

    def test_empty_is_identity(self, sigma235):
        assert parse_word("", sigma235).is_identity()

    def test_nine_letters(self):
        w = parse_word("V^2 Z Y X A^2 B^2", ABC)
        assert len(w) == 9

    def test_long_mixed_word(self):
        w = parse_word("W^4 X V^-1 X V X^-1 Z^-1 V^-1 Z Y Z^-1 V C^2 D^2", ABC)
        assert len(w) == 19
        assert w.exponent_sum("V") == 0
        assert w.exponent_sum("W") == 4

    def test_juxtaposition_and_longest_match(self):
        pres = GroupPresentation.parse(["Q", "Q1"], [])
        w = parse_word("Q1Q", pres)
        assert w.letters == (("Q1", 1), ("Q", 1))

    def test_unknown_generator(self, sigma235):
        with pytest.raises(UnknownGenerator):
            parse_word("H R", sigma235)

    def test_malformed_exponent(self, sigma235):
        with pytest.raises(MalformedExponent):
            parse_word("H^x", sigma235)

    def test_negative_exponent(self, sigma235):
        w = parse_word("Q1^-3", sigma235)
        assert w.letters == (("Q1", -1),) * 3


names = st.sampled_from(list(ABC.generators))
words = st.lists(st.tuples(names, st.integers(-4, 4)), max_size=12).map(
    Word.from_syllables
)


class TestReduction:
    @given(words)
    @settings(max_examples=200, deadline=None)
    def test_reduction_idempotent(self, w):
        assert w.reduced().reduced() == w.reduced()

    @given(words)
    @settings(max_examples=200, deadline=None)
    def test_inverse_cancels(self, w):
        assert (w * w.inverse()).is_identity()

    @given(words)
    @settings(max_examples=300, deadline=None)
    def test_parse_print_round_trip(self, w):
        assert parse_word(str(w), ABC).reduced() == w.reduced()


class TestFoxDerivative:
    def test_power_rule(self, sigma235):
        d = fox_derivative(parse_word("Q3^5", sigma235), "Q3")
        got = sorted(str(w) for c, w in d.terms)
        assert all(c == 1 for c, _ in d.terms)
        assert got == sorted(["", "Q3", "Q3^2", "Q3^3", "Q3^4"])

    def test_other_generator_vanishes(self, sigma235):
        assert fox_derivative(parse_word("Q3", sigma235), "Q1").is_zero()

    def test_commutator(self):
        pres = GroupPresentation.parse(["U", "Z"], [])
        d = fox_derivative(parse_word("U Z U^-1 Z^-1", pres), "U")
        # d(UZU^-1 Z^-1)/dU = 1 - UZU^-1
        by_word = {str(w.reduced()): c for c, w in d.terms}
        assert by_word == {"": 1, "U Z U^-1": -1}

    def test_inverse_rule(self):
        pres = GroupPresentation.parse(["g"], [])
        d = fox_derivative(parse_word("g^-1", pres), "g")
        assert [(c, str(w)) for c, w in d.terms] == [(-1, "g^-1")]

    def test_fundamental_identity_on_fixtures(
        self, sigma235, fundamental_rep, sigma235_extended, extended_path
    ):
        # sum_g Eval(dr/dg) (Ad(rho(g)) - 1) = Ad(rho(r)) - 1
        cases = [
            (sigma235, fundamental_rep),
            (sigma235_extended, extended_path.at(0.3)),
        ]
        for pres, rep in cases:
            for r in pres.relators:
                lhs = np.zeros((3, 3))
                for g in pres.generators:
                    blk = np.zeros((3, 3))
                    for c, prefix in fox_derivative(r, g).terms:
                        blk += c * ad(evaluate_word(rep, prefix))
                    lhs += blk @ (ad(rep.image(g)) - np.eye(3))
                rhs = ad(evaluate_word(rep, r)) - np.eye(3)
                assert np.max(np.abs(lhs - rhs)) < 1e-9


class TestAbelianized:
    def test_sigma235_rows(self, sigma235):
        B = abelianized_boundary(sigma235)
        # generators (H, Q1, Q2, Q3); relator Q1^2 H has row (1, 2, 0, 0)
        assert B[3] == [1, 2, 0, 0]
        assert B[4] == [1, 0, 3, 0]
        assert B[5] == [1, 0, 0, 5]
        assert B[6] == [1, 1, 1, 1]
        assert B[0] == [0, 0, 0, 0]

    def test_free_group_empty(self):
        assert abelianized_boundary(ABC) == []

    def test_surgery_relator_row(self, surgery_words):
        B = abelianized_boundary(surgery_words)
        # V^2 Z Y X over (V, W, X, Y, Z)
        assert B[0] == [2, 0, 1, 1, 1]
        # the long W-relator has V-exponent 0 and Z-exponent -1
        assert B[1] == [0, 4, 1, 1, -1]
