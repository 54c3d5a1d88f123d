import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flatflow.errors import InvalidParameters, NoRationalFound
from flatflow.quaternions import (
    ONE,
    ExactCircleElement,
    Quaternion,
    UnitQuaternion,
    ad,
    quat_mul,
    rationalize,
    trace_ad_minus_3,
)

I = UnitQuaternion.of(0, 1, 0, 0)
J = UnitQuaternion.of(0, 0, 1, 0)
K = UnitQuaternion.of(0, 0, 0, 1)


def circ(axis, turns):
    return ExactCircleElement(axis, Fraction(turns))


class TestHamiltonProduct:
    def test_ij_is_k(self):
        assert (I * J).isclose(K, 1e-15)
        assert (J * K).isclose(I, 1e-15)
        assert (K * I).isclose(J, 1e-15)
        assert (I * I).isclose(-ONE, 1e-15)

    def test_conjugated_j_by_i(self):
        # i^-1 j i = -j
        got = I.inverse() * (J * I)
        assert got.isclose(-J, 1e-15)

    def test_sixth_root_cubes_to_minus_one(self):
        # exp(pi i/3)^3 = -1
        u = circ("i", "1/6")
        cube = u * u * u
        assert isinstance(cube, ExactCircleElement)
        assert cube.turns == Fraction(1, 2)
        assert cube.quaternion().isclose(-ONE, 1e-14)

    def test_norm_multiplicative(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            a = Quaternion(*rng.normal(size=4))
            b = Quaternion(*rng.normal(size=4))
            assert math.isclose((a * b).norm(), a.norm() * b.norm(), rel_tol=1e-12)

    def test_conjugate_reverses_products(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            a = Quaternion(*rng.normal(size=4))
            b = Quaternion(*rng.normal(size=4))
            lhs = (a * b).conjugate()
            rhs = b.conjugate() * a.conjugate()
            assert lhs.distance(rhs) < 1e-12


class TestUnitQuaternion:
    def test_rejects_non_unit(self):
        with pytest.raises(InvalidParameters):
            UnitQuaternion.of(1, 1, 0, 0)

    def test_long_products_stay_unit(self):
        q = circ("j", "1/7").quaternion()
        acc = ONE
        for _ in range(2000):
            acc = acc * q
        assert abs(acc.norm() - 1.0) < 1e-12


class TestAd:
    def test_identity(self):
        assert np.allclose(ad(ONE), np.eye(3))

    def test_circle_fixes_axis_and_rotates_plane(self):
        # ad(e^{i theta}) fixes i and rotates (j, k) by 2 theta
        theta = 0.3
        q = UnitQuaternion.of(math.cos(theta), math.sin(theta), 0, 0)
        M = ad(q)
        assert np.allclose(M @ [1, 0, 0], [1, 0, 0], atol=1e-12)
        assert np.allclose(
            M @ [0, 1, 0], [0, math.cos(2 * theta), math.sin(2 * theta)], atol=1e-12
        )

    def test_trace_closed_form(self):
        q = circ("i", "1/5")  # e^{2 pi i/5}
        expected = 2 * (math.cos(4 * math.pi / 5) - 1)
        assert math.isclose(float(np.trace(ad(q))) - 3, expected, abs_tol=1e-12)
        assert math.isclose(expected, -3.618033988749895, abs_tol=1e-9)

    def test_homomorphism_on_random_pairs(self):
        rng = np.random.default_rng(42)
        worst = 0.0
        for _ in range(1000):
            a = UnitQuaternion.normalized(*rng.normal(size=4))
            b = UnitQuaternion.normalized(*rng.normal(size=4))
            diff = np.max(np.abs(ad(a * b) - ad(a) @ ad(b)))
            worst = max(worst, diff)
        assert worst < 1e-9

    def test_kills_center(self):
        rng = np.random.default_rng(43)
        for _ in range(100):
            q = UnitQuaternion.normalized(*rng.normal(size=4))
            mq = UnitQuaternion.of(-q.w, -q.x, -q.y, -q.z)
            assert np.allclose(ad(q), ad(mq), atol=1e-12)

    def test_orthogonal_det_one(self):
        rng = np.random.default_rng(44)
        for _ in range(100):
            M = ad(UnitQuaternion.normalized(*rng.normal(size=4)))
            assert np.max(np.abs(M.T @ M - np.eye(3))) < 1e-10
            assert math.isclose(np.linalg.det(M), 1.0, abs_tol=1e-10)


class TestTraceAdMinus3:
    def test_minus_one_gives_zero(self):
        assert trace_ad_minus_3(circ("i", "1/2")) == 0.0

    def test_order_three(self):
        assert math.isclose(trace_ad_minus_3(circ("i", "1/3")), -3.0, abs_tol=1e-12)

    def test_i_gives_minus_four(self):
        assert math.isclose(trace_ad_minus_3(I), -4.0, abs_tol=1e-12)

    def test_range(self):
        rng = np.random.default_rng(45)
        for _ in range(200):
            q = UnitQuaternion.normalized(*rng.normal(size=4))
            assert -4.0 <= trace_ad_minus_3(q) <= 0.0


class TestExactCircle:
    def test_same_axis_adds_turns_exactly(self):
        a = circ("i", "1/3")
        total = a
        for _ in range(999):
            total = total * a
        assert isinstance(total, ExactCircleElement)
        assert total.turns == Fraction(1000, 3)

    def test_central_compatible_with_any_axis(self):
        m1 = circ("j", "1/2")
        z = m1 * circ("i", "1/4")
        assert isinstance(z, ExactCircleElement)
        assert z.quaternion().isclose(-I, 1e-14)

    def test_conversion_is_unit(self):
        for turns in ("1/120", "-1/60", "7/13"):
            q = circ("k", turns).quaternion()
            assert abs(q.norm() - 1.0) < 1e-14

    def test_different_axes_fall_back_to_float(self):
        p = circ("i", "1/8") * circ("j", "1/8")
        assert isinstance(p, UnitQuaternion)


class TestRationalize:
    def test_recovers_28_over_15(self):
        assert rationalize(1.8666666667, 10**6, 1e-9) == Fraction(28, 15)

    def test_zero(self):
        assert rationalize(0.0, 10, 1e-9) == Fraction(0)

    def test_denominator_bound_excludes(self):
        with pytest.raises(NoRationalFound):
            rationalize(0.3333333333, 2, 1e-9)

    @given(
        p=st.integers(min_value=-(10**4), max_value=10**4),
        q=st.integers(min_value=1, max_value=10**4),
    )
    @settings(max_examples=300, deadline=None)
    def test_round_trip(self, p, q):
        assert rationalize(p / q, q, 1e-9) == Fraction(p, q)

    def test_rejects_bad_arguments(self):
        with pytest.raises(InvalidParameters):
            rationalize(0.5, 0, 1e-9)
        with pytest.raises(InvalidParameters):
            rationalize(0.5, 10, 0.0)


def test_quat_mul_mixed_exact_float():
    q = quat_mul(circ("i", "1/4"), J)
    assert isinstance(q, Quaternion)
    assert q.isclose(K, 1e-14)  # i * j = k
