import math
from fractions import Fraction

import numpy as np
import pytest

from flatflow.errors import NoSolution, UndefinedGenerator
from flatflow.quaternions import ONE, ExactCircleElement, UnitQuaternion, as_quaternion
from flatflow.reps import (
    CircleExpr,
    ConjugateExpr,
    RepClass,
    Representation,
    RepresentationPath,
    SolvedConjugator,
    classify,
    evaluate_word,
    solve_conjugator,
    validate,
)
from flatflow.words import GroupPresentation, parse_word


def circ(axis, turns):
    return ExactCircleElement(axis, Fraction(turns))


class TestEvaluateWord:
    def test_fundamental_on_torsion_relator(self, sigma235, fundamental_rep):
        q = as_quaternion(
            evaluate_word(fundamental_rep, parse_word("Q1^2 H", sigma235))
        )
        assert q.distance(ONE) < 1e-12

    def test_trivial_rep(self, sigma235, trivial_rep):
        w = parse_word("H Q1 Q2 Q3", sigma235)
        assert as_quaternion(evaluate_word(trivial_rep, w)).distance(ONE) < 1e-14

    def test_hyperbolic_surgery_relators(self, surgery_words, hyperbolic_alpha):
        for r in surgery_words.relators:
            q = as_quaternion(evaluate_word(hyperbolic_alpha, r))
            assert q.distance(ONE) < 1e-12

    def test_undefined_generator(self, sigma235, trivial_rep):
        rep = Representation({"H": circ("i", 0)})
        with pytest.raises(UndefinedGenerator):
            evaluate_word(rep, parse_word("Q1", sigma235))

    def test_exactness_on_circle(self):
        rep = Representation({"a": circ("i", "1/7"), "b": circ("i", "2/7")})
        pres = GroupPresentation.parse(["a", "b"], [])
        img = evaluate_word(rep, parse_word("a^3 b^2", pres))
        assert isinstance(img, ExactCircleElement)
        assert img.turns == Fraction(1)


class TestValidate:
    def test_fundamental_passes(self, sigma235, fundamental_rep):
        assert validate(sigma235, fundamental_rep, 1e-9).passed

    def test_extended_path_at_zero_passes(self, sigma235_extended, extended_path):
        rep = extended_path.at(Fraction(0))
        report = validate(sigma235_extended, rep, 1e-9)
        assert report.passed

    def test_wrong_assignment_fails(self, sigma235, fundamental_rep):
        images = dict(fundamental_rep.images)
        images["Q1"] = circ("j", "1/4")  # j instead of i
        report = validate(sigma235, Representation(images), 1e-9)
        assert not report.passed
        assert report.deviations["H Q1 Q2 Q3"] > 1e-3


class TestClassify:
    def test_trivial_is_central(self, trivial_rep):
        assert classify(trivial_rep) is RepClass.CENTRAL
        assert RepClass.CENTRAL.dim_h0 == 3

    def test_path_start_is_abelian(self, extended_path):
        cls = classify(extended_path.at(Fraction(0)))
        assert cls is RepClass.ABELIAN
        assert cls.dim_h0 == 1

    def test_fundamental_is_irreducible(self, fundamental_rep):
        assert classify(fundamental_rep) is RepClass.IRREDUCIBLE

    def test_conjugation_invariant(self, fundamental_rep, extended_path):
        rng = np.random.default_rng(11)
        reps = [fundamental_rep, extended_path.at(Fraction(0)), extended_path.at(0.4)]
        for rep in reps:
            expected = classify(rep)
            for _ in range(5):
                q = UnitQuaternion.normalized(*rng.normal(size=4))
                assert classify(rep.conjugated_by(q)) is expected


class TestPaths:
    def test_valid_at_101_samples(self, sigma235_extended, extended_path):
        worst = 0.0
        for k in range(101):
            rep = extended_path.at(k / 100.0)
            worst = max(worst, validate(sigma235_extended, rep).max_deviation)
        assert worst < 1e-8

    def test_abelian_images_factor_through_exponent_sums(self, extended_path):
        # at t = 0 all images lie in one circle: any word's image depends
        # only on its exponent sums
        rep = extended_path.at(Fraction(0))
        pres = GroupPresentation.parse(list(rep.images.keys()), [])
        w1 = parse_word("H Q1 Q2 Q1 Q2^-1 Q1^-1", pres)  # exponents H1 Q1(1) ...
        w2 = parse_word("Q1 H", pres)
        q1 = as_quaternion(evaluate_word(rep, w1))
        q2 = as_quaternion(evaluate_word(rep, w2))
        assert q1.distance(q2) < 1e-10


class TestSolveConjugator:
    def test_identity_at_zero(self, extended_path):
        g = solve_conjugator(extended_path.presentation, extended_path, Fraction(0))
        assert isinstance(g, ExactCircleElement)
        assert g.turns == 0

    def test_solves_at_one(self, sigma235_extended, extended_path):
        g = solve_conjugator(sigma235_extended, extended_path, Fraction(1))
        rep = extended_path.at(Fraction(1))
        assert validate(sigma235_extended, rep, 1e-9).passed
        # the solved conjugator tilts the core off the i-circle
        q = as_quaternion(g)
        assert abs(q.y) > 1e-3

    def test_inconsistent_constraint(self):
        # demand Q^3 H = 1 with Q of order 4 (turns 1/4): impossible
        pres = GroupPresentation.parse(["H", "Q"], ["Q^3 H"])
        path = RepresentationPath(
            pres,
            {
                "H": CircleExpr("i", (Fraction(1, 2),)),
                "Q": ConjugateExpr(CircleExpr("i", (Fraction(1, 4),)), "g"),
            },
            {"g": SolvedConjugator(axis="j", relator="Q^3 H")},
        )
        with pytest.raises(NoSolution):
            path.at(Fraction(0))
