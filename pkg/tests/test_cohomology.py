from fractions import Fraction

import numpy as np
import pytest

from flatflow.cohomology import (
    NOT_APPLICABLE,
    RHO_CONSTANT,
    banded_rank,
    build_cocycle_system,
    cohomology_summary,
    dim_z1,
    path_certificate,
    restriction_cokernel,
    Inclusion,
    ExtraSource,
)
from flatflow.errors import IllConditioned, InvalidInclusion, InvalidParameters
from flatflow.quaternions import ExactCircleElement, UnitQuaternion, ad
from flatflow.reps import Representation, RepresentationPath, CircleExpr
from flatflow.words import GroupPresentation, Word, abelianized_boundary, parse_word


def circ(axis, turns):
    return ExactCircleElement(axis, Fraction(turns))


class TestBuildSystem:
    def test_extended_system_shape(self, sigma235_extended, extended_path):
        system = build_cocycle_system(sigma235_extended, extended_path.at(Fraction(0)))
        assert system.matrix.shape == (27, 18)

    def test_trivial_rep_gives_abelianized_tensor_identity(self, sigma235, trivial_rep):
        system = build_cocycle_system(sigma235, trivial_rep)
        B = np.array(abelianized_boundary(sigma235), dtype=float)
        expected = np.kron(B, np.eye(3))
        assert np.max(np.abs(system.matrix - expected)) < 1e-12

    def test_weight2_commutator_block(self):
        # relator U Z U^-1 Z^-1 with U -> 1, Z of turns 1/3: the U-block is
        # the scalar 1 - exp(4 pi i/3)
        pres = GroupPresentation.parse(["U", "Z"], ["U Z U^-1 Z^-1"])
        rep = Representation({"U": circ("i", 0), "Z": circ("i", "1/3")})
        system = build_cocycle_system(pres, rep, coefficients="weight2")
        expected = 1 - np.exp(4j * np.pi / 3)
        assert abs(system.matrix[0, 0] - expected) < 1e-12

    def test_weight2_requires_circle(self, fundamental_rep, sigma235):
        with pytest.raises(InvalidParameters):
            build_cocycle_system(sigma235, fundamental_rep, coefficients="weight2")


class TestDimZ1:
    def test_extended_is_nine_along_path(self, sigma235_extended, extended_path):
        for t in (Fraction(0), Fraction(1, 2), Fraction(1)):
            assert dim_z1(sigma235_extended, extended_path.at(t)) == 9

    def test_sigma235_fundamental_is_three(self, sigma235, fundamental_rep):
        assert dim_z1(sigma235, fundamental_rep) == 3

    def test_trivial_on_free_group(self):
        for n in (1, 2, 4):
            pres = GroupPresentation.parse([f"g{i}" for i in range(n)], [])
            rep = Representation({f"g{i}": circ("i", 0) for i in range(n)})
            assert dim_z1(pres, rep) == 3 * n

    def test_conjugation_invariance(self, sigma235, fundamental_rep):
        rng = np.random.default_rng(5)
        for _ in range(3):
            q = UnitQuaternion.normalized(*rng.normal(size=4))
            assert dim_z1(sigma235, fundamental_rep.conjugated_by(q)) == 3

    def test_exact_and_float_agree_on_circle_fixtures(
        self, sigma235, trivial_rep, extended_path, sigma235_extended, hyperbolic_plan
    ):
        # circle representations take the exact cyclotomic path internally;
        # dim_z1 raises if it disagrees with the float rank
        assert dim_z1(sigma235, trivial_rep) == 0
        assert dim_z1(sigma235_extended, extended_path.at(Fraction(0))) == 9
        m5 = hyperbolic_plan.paths["m5_deformation"]
        for t in (Fraction(0), Fraction(1, 4), Fraction(1)):
            assert dim_z1(m5.presentation, m5.at(t)) == 5

    def test_coboundaries_lie_in_kernel(self, sigma235, fundamental_rep):
        system = build_cocycle_system(sigma235, fundamental_rep)
        for axis in range(3):
            v = np.zeros(3)
            v[axis] = 1.0
            cocycle = np.concatenate(
                [
                    v - ad(fundamental_rep.image(g)) @ v
                    for g in sigma235.generators
                ]
            )
            assert np.max(np.abs(system.matrix @ cocycle)) < 1e-9


class TestBandedRank:
    def test_detects_ambiguous_band(self):
        M = np.diag([1.0, 1e-7])
        with pytest.raises(IllConditioned):
            banded_rank(M)

    def test_zero_matrix(self):
        assert banded_rank(np.zeros((3, 3))) == 0


class TestSummary:
    def test_sigma235_fundamental(self, sigma235, fundamental_rep):
        s = cohomology_summary(sigma235, fundamental_rep)
        assert (s.dim_z1, s.dim_h0, s.dim_h1, s.h) == (3, 0, 0, 0)

    def test_sigma235_trivial(self, sigma235, trivial_rep):
        s = cohomology_summary(sigma235, trivial_rep)
        assert (s.dim_h0, s.dim_h1, s.h) == (3, 0, 3)

    def test_identities_hold(self, sigma235_extended, extended_path):
        for t in (Fraction(0), Fraction(1, 2)):
            s = cohomology_summary(sigma235_extended, extended_path.at(t))
            assert s.dim_h1 == s.dim_z1 - 3 + s.dim_h0
            assert s.h == s.dim_h0 + s.dim_h1


KLEIN = GroupPresentation.parse(["m", "t"], ["t m t^-1 m"])
FREE_ONE = GroupPresentation.parse(["g"], [])


class TestRestrictionCokernel:
    def test_trivial_subgroup(self, sigma235, fundamental_rep):
        empty = GroupPresentation.parse([], [])
        assert (
            restriction_cokernel(
                sigma235, fundamental_rep, [Inclusion(empty, {})]
            )
            == 0
        )

    def test_untwisted_fiber_class(self, sigma235, trivial_rep):
        # real (untwisted) coefficients: Z^1(Sigma; R) = 0 since H_1 = 0, and
        # the Klein-piece source restricts to zero on the gluing torus, so
        # the one-dimensional H^1 of the torus survives to the cokernel.
        incl = Inclusion(FREE_ONE, {"g": parse_word("H", sigma235)})
        klein_rep = Representation({"m": circ("i", 0), "t": circ("i", 0)})
        extra = ExtraSource(
            KLEIN, klein_rep, [{"g": parse_word("m", KLEIN)}]
        )
        assert (
            restriction_cokernel(
                sigma235,
                trivial_rep,
                [incl],
                extra_sources=[extra],
                coefficients="real",
            )
            == 1
        )

    def test_adjoint_surjective_restriction(self):
        # free group <a>, a -> i, restricted to <g>, g -> a: H^1 surjects
        pres = GroupPresentation.parse(["a"], [])
        rep = Representation({"a": circ("i", "1/4")})
        out = restriction_cokernel(
            pres, rep, [Inclusion(FREE_ONE, {"g": parse_word("a", pres)})]
        )
        assert out == 0

    def test_adjoint_central_target(self):
        # g -> a^2 maps to -1: B^1(target) = 0 and the restriction image is
        # the rank-1 image of (1 + Ad(i)), so the cokernel is 2
        pres = GroupPresentation.parse(["a"], [])
        rep = Representation({"a": circ("i", "1/4")})
        out = restriction_cokernel(
            pres, rep, [Inclusion(FREE_ONE, {"g": parse_word("a^2", pres)})]
        )
        assert out == 2

    def test_invalid_inclusion(self, sigma235, fundamental_rep):
        bad = GroupPresentation.parse(["g"], ["g^5"])
        # g -> Q1 has order 4, not 5
        with pytest.raises(InvalidInclusion):
            restriction_cokernel(
                sigma235,
                fundamental_rep,
                [Inclusion(bad, {"g": parse_word("Q1", sigma235)})],
            )


class TestPathCertificate:
    def test_extended_path_is_rho_constant(self, extended_path):
        cert = path_certificate(extended_path.presentation, extended_path)
        assert cert.verdict == RHO_CONSTANT
        assert cert.h == 6
        assert all(s.dim_z1 == 9 for s in cert.summaries)
        assert cert.summaries[0].dim_h0 == 1
        assert cert.summaries[0].dim_h1 == 7

    def test_abelian_deformation_is_rho_constant(self, hyperbolic_plan):
        path = hyperbolic_plan.paths["m5_deformation"]
        cert = path_certificate(
            path.presentation, path, [Fraction(0), Fraction(1, 2), Fraction(1)]
        )
        assert cert.verdict == RHO_CONSTANT
        assert all(s == cert.summaries[0] for s in cert.summaries)

    def test_wrong_jump_is_not_applicable(self):
        # a family whose dimensions jump by more than the allowed pattern:
        # a -> exp(2 pi i t) on the free group <a>; at t=0 it is central
        # (H^0 = 3), not abelian-noncentral, so the hypothesis fails.
        pres = GroupPresentation.parse(["a"], [])
        path = RepresentationPath(
            pres, {"a": CircleExpr("i", (Fraction(0), Fraction(1, 3)))}
        )
        cert = path_certificate(pres, path, [Fraction(0), Fraction(1, 2), Fraction(1)])
        assert cert.verdict == NOT_APPLICABLE

    def test_requires_zero_sample(self, extended_path):
        with pytest.raises(InvalidParameters):
            path_certificate(
                extended_path.presentation, extended_path, [Fraction(1, 2)]
            )
